//! Detection of compatible abelian group structure on an algebra.
//!
//! Subuniverse closures (polynomial clones, cube subpowers) are quadratic in
//! the closure size when computed by generic breadth-first composition. When
//! one of the basic operations is a cyclic abelian group operation and every
//! other basic operation is multilinear over it, those closures are exactly
//! the module spans of their generators, which is computed in the closure's
//! rank instead of its cardinality. All preconditions are verified
//! exhaustively on the finite tables before the fast path is used.

use crate::algebra::{Element, FiniteAlgebra, Operation, ResolvedOp};

/// A verified cyclic abelian group structure on the domain.
#[derive(Debug, Clone)]
pub struct GroupStructure {
    pub op_name: String,
    pub identity: Element,
    /// Isomorphism to Z_N: `to_zn[a]` is the discrete log of `a`.
    pub to_zn: Vec<u64>,
    pub from_zn: Vec<Element>,
}

impl GroupStructure {
    pub fn order(&self) -> u64 {
        self.to_zn.len() as u64
    }
}

/// Checks whether `op` is an abelian group operation and, if the group is
/// cyclic, returns the structure.
fn cyclic_group_structure(op: &Operation, n: usize) -> Option<GroupStructure> {
    if op.arity != 2 {
        return None;
    }
    let g = |a: usize, b: usize| op.table[a * n + b];
    // commutative
    for a in 0..n {
        for b in a + 1..n {
            if g(a, b) != g(b, a) {
                return None;
            }
        }
    }
    // two-sided identity
    let identity = (0..n).find(|&e| (0..n).all(|x| g(e, x) == x && g(x, e) == x))?;
    // associative
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if g(g(a, b), c) != g(a, g(b, c)) {
                    return None;
                }
            }
        }
    }
    // inverses
    if !(0..n).all(|a| (0..n).any(|b| g(a, b) == identity)) {
        return None;
    }
    // a generator, if the group is cyclic
    'candidates: for c in 0..n {
        let mut from_zn = Vec::with_capacity(n);
        let mut cur = identity;
        for _ in 0..n {
            if from_zn.contains(&cur) {
                continue 'candidates;
            }
            from_zn.push(cur);
            cur = g(cur, c);
        }
        let mut to_zn = vec![0u64; n];
        for (k, &a) in from_zn.iter().enumerate() {
            to_zn[a] = k as u64;
        }
        return Some(GroupStructure {
            op_name: op.name.clone(),
            identity,
            to_zn,
            from_zn,
        });
    }
    None
}

/// Exhaustively checks that `op` distributes over the group operation in
/// every argument position.
pub fn op_is_multilinear(
    algebra: &FiniteAlgebra,
    op: ResolvedOp<'_>,
    group: &GroupStructure,
) -> bool {
    let n = algebra.domain_size;
    let arity = op.arity();
    if arity == 0 {
        return true; // constants enter the span as generators
    }
    // cost guard: N^(arity+1) * arity checks
    if (n as u128).pow(arity as u32 + 1) > 1 << 28 {
        return false;
    }
    let plus = algebra.op(&group.op_name).expect("group op present");
    let add = |a: usize, b: usize| plus.table[a * n + b];
    let mut args = vec![0usize; arity];
    let mut lhs_args = vec![0usize; arity];
    for pos in 0..arity {
        let others = n.pow((arity - 1) as u32);
        for rest in 0..others {
            // fill the non-`pos` argument slots from `rest`
            let mut r = rest;
            for i in (0..arity).rev() {
                if i == pos {
                    continue;
                }
                args[i] = r % n;
                r /= n;
            }
            for x in 0..n {
                for y in 0..n {
                    lhs_args.copy_from_slice(&args);
                    lhs_args[pos] = add(x, y);
                    let lhs = op.apply(&lhs_args, n);
                    lhs_args[pos] = x;
                    let fx = op.apply(&lhs_args, n);
                    lhs_args[pos] = y;
                    let fy = op.apply(&lhs_args, n);
                    if lhs != add(fx, fy) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Finds a basic binary operation that is a cyclic abelian group such that
/// every other basic operation (and the listed template arities) is
/// multilinear over it.
pub fn find_module_structure(
    algebra: &FiniteAlgebra,
    template_arities: &[usize],
) -> Option<GroupStructure> {
    'candidates: for op in &algebra.operations {
        let Some(group) = cyclic_group_structure(op, algebra.domain_size) else {
            continue;
        };
        for other in &algebra.operations {
            if other.name == group.op_name {
                continue;
            }
            if !op_is_multilinear(algebra, ResolvedOp::Table(other), &group) {
                continue 'candidates;
            }
        }
        if let Some(template) = &algebra.template {
            for &arity in template_arities {
                let resolved = ResolvedOp::Template { template, arity };
                if !op_is_multilinear(algebra, resolved, &group) {
                    continue 'candidates;
                }
            }
        }
        return Some(group);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cyclic_groups_are_detected() {
        let z4 = fixtures::cyclic_group(4);
        let s = find_module_structure(&z4, &[]).unwrap();
        assert_eq!(s.op_name, "plus");
        assert_eq!(s.identity, 0);
        assert_eq!(s.order(), 4);
        // to_zn is a group isomorphism onto Z_4
        let plus = z4.op("plus").unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let sum = plus.apply(&[a, b], 4);
                assert_eq!(s.to_zn[sum], (s.to_zn[a] + s.to_zn[b]) % 4);
            }
        }
    }

    #[test]
    fn z9_f2_is_multilinear() {
        let a3 = fixtures::z9_f2();
        assert!(find_module_structure(&a3, &[]).is_some());
    }

    #[test]
    fn ap_template_arities_check() {
        use crate::algebra::OpTemplate;
        let a3 = fixtures::cyclic_group(9).with_template(OpTemplate::ApFamily { p: 3 });
        assert!(find_module_structure(&a3, &[1, 2, 3]).is_some());
    }

    #[test]
    fn dihedral_has_no_module_structure() {
        let d8 = fixtures::dihedral_8();
        assert!(find_module_structure(&d8, &[]).is_none());
    }

    #[test]
    fn semilattice_has_no_module_structure() {
        let sl = fixtures::meet_semilattice_2();
        assert!(find_module_structure(&sl, &[]).is_none());
    }
}
