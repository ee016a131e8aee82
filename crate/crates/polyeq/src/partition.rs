//! Partitions of the domain in canonical min-representative form.
//!
//! Used for congruences; `zero()` is the identity relation 0_A and `one()`
//! the total relation 1_A.

use std::fmt;

/// Equivalence relation on `0..n`, stored as `rep[a]` = minimum element of
/// the class of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    rep: Vec<usize>,
}

impl Partition {
    /// The identity relation 0_A.
    pub fn zero(n: usize) -> Partition {
        Partition {
            rep: (0..n).collect(),
        }
    }

    /// The total relation 1_A.
    pub fn one(n: usize) -> Partition {
        Partition { rep: vec![0; n] }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Partition {
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        uf.into_partition()
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    pub fn rep(&self, a: usize) -> usize {
        self.rep[a]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rep[a] == self.rep[b]
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn is_one(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    /// Classes as sorted vectors, ordered by their minimum element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.rep.len();
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for a in 0..n {
            let r = self.rep[a];
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(a);
        }
        out
    }

    /// All related pairs (a, b) with a < b.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.rep.len() {
            for b in a + 1..self.rep.len() {
                if self.related(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Refinement order: `self <= other` iff every class of `self` is
    /// contained in a class of `other`.
    pub fn leq(&self, other: &Partition) -> bool {
        assert_eq!(self.size(), other.size());
        (0..self.size()).all(|a| other.related(a, self.rep[a]))
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        assert_eq!(self.size(), other.size());
        let n = self.size();
        let mut uf = UnionFind::new(n);
        for a in 0..n {
            for b in a + 1..n {
                if self.related(a, b) && other.related(a, b) {
                    uf.union(a, b);
                }
            }
        }
        uf.into_partition()
    }

    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.size(), other.size());
        let mut uf = UnionFind::new(self.size());
        for a in 0..self.size() {
            uf.union(a, self.rep[a]);
            uf.union(a, other.rep[a]);
        }
        uf.into_partition()
    }

    /// Checks the representative-array invariants.
    pub fn check_invariants(&self) -> bool {
        self.rep
            .iter()
            .enumerate()
            .all(|(a, &r)| r <= a && self.rep[r] == r)
    }
}

impl fmt::Display for Partition {
    /// Stable text format: one class per line, elements sorted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for class in self.classes() {
            let items: Vec<String> = class.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

/// Plain union-find with path compression.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, a: usize) -> usize {
        if self.parent[a] != a {
            let root = self.find(self.parent[a]);
            self.parent[a] = root;
        }
        self.parent[a]
    }

    /// Returns true if the two elements were in distinct classes.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Keep the minimum element as the root so the final form is canonical.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let rep = (0..n).map(|a| self.find(a)).collect();
        Partition { rep }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let p = Partition::from_pairs(4, &[(3, 1), (2, 0)]);
        assert!(p.check_invariants());
        assert_eq!(p.classes(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(p.rep(3), 1);
    }

    #[test]
    fn lattice_ops() {
        let a = Partition::from_pairs(4, &[(0, 1)]);
        let b = Partition::from_pairs(4, &[(1, 2)]);
        assert!(Partition::zero(4).leq(&a));
        assert!(a.leq(&Partition::one(4)));
        assert_eq!(a.meet(&b), Partition::zero(4));
        assert_eq!(a.join(&b), Partition::from_pairs(4, &[(0, 1), (1, 2)]));
    }

    #[test]
    fn display_is_sorted_classes() {
        let p = Partition::from_pairs(4, &[(0, 2), (1, 3)]);
        assert_eq!(p.to_string(), "{0,2}\n{1,3}\n");
    }
}
