//! Spans of integer vectors modulo N, with exact membership tests.
//!
//! Subuniverse closures over algebras with a compatible abelian group
//! operation reduce to submodule computations over Z_N. The basis kept here
//! is a Howell-style triangular generating set: every row's first nonzero
//! entry (the pivot) is a divisor of N, pivot columns are distinct, and for
//! every row the annihilator multiple is re-inserted, so greedy reduction
//! decides membership exactly even though Z_N is not a field.

use std::collections::BTreeMap;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone)]
pub struct ZnSpan {
    modulus: u64,
    width: usize,
    /// pivot column -> row; row[col] is a divisor of the modulus and all
    /// entries left of the pivot are zero.
    rows: BTreeMap<usize, Vec<u64>>,
}

impl ZnSpan {
    pub fn new(modulus: u64, width: usize) -> Self {
        assert!(modulus >= 1);
        ZnSpan {
            modulus,
            width,
            rows: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Current triangular generating set.
    pub fn basis(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.rows.values()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of elements in the span: product over rows of N / pivot.
    pub fn size(&self) -> u128 {
        self.rows
            .values()
            .map(|row| {
                let piv = row.iter().find(|&&v| v != 0).copied().unwrap();
                (self.modulus / piv) as u128
            })
            .product()
    }

    fn scaled_add(&self, target: &mut [u64], coeff: u64, row: &[u64]) {
        let m = self.modulus;
        for (t, &r) in target.iter_mut().zip(row) {
            *t = (*t + coeff % m * (r % m)) % m;
        }
    }

    /// Inserts a vector; returns true if the span grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.width);
        let m = self.modulus;
        if m == 1 {
            return false;
        }
        let mut pending: Vec<Vec<u64>> = vec![v.iter().map(|&x| x % m).collect()];
        let mut grew = false;
        while let Some(mut cur) = pending.pop() {
            let Some(j) = cur.iter().position(|&x| x != 0) else {
                continue;
            };
            match self.rows.get(&j) {
                Some(row) => {
                    let p = row[j];
                    if cur[j] % p == 0 {
                        let c = m - cur[j] / p; // subtract (cur[j]/p) * row
                        let row = row.clone();
                        self.scaled_add(&mut cur, c, &row);
                        debug_assert_eq!(cur[j], 0);
                        pending.push(cur);
                    } else {
                        // Combine to the gcd pivot and re-reduce both parts.
                        let (g, s, t) = ext_gcd(p as i128, cur[j] as i128);
                        let s = (s.rem_euclid(m as i128)) as u64;
                        let t = (t.rem_euclid(m as i128)) as u64;
                        let old = self.rows.remove(&j).unwrap();
                        let mut new_row = vec![0u64; self.width];
                        self.scaled_add(&mut new_row, s, &old);
                        self.scaled_add(&mut new_row, t, &cur);
                        debug_assert_eq!(new_row[j] % (g as u64), 0);
                        pending.push(old);
                        pending.push(cur);
                        pending.push(new_row);
                    }
                }
                None => {
                    let a = cur[j];
                    let d = gcd(a, m);
                    if a != d {
                        // Bring the pivot to divisor form: s*a = d (mod m) for
                        // some s from the extended gcd; the remainder of cur
                        // against the new row is re-inserted, so no span is
                        // lost even when s is not a unit.
                        let (_, s, _) = ext_gcd(a as i128, m as i128);
                        let s = (s.rem_euclid(m as i128)) as u64;
                        let mut new_row = vec![0u64; self.width];
                        self.scaled_add(&mut new_row, s, &cur);
                        debug_assert_eq!(new_row[j], d);
                        pending.push(cur);
                        pending.push(new_row);
                        continue;
                    }
                    // Howell completion: the annihilator multiple kills the
                    // pivot but may have a nonzero tail.
                    let ann = m / d;
                    let mut shadow = vec![0u64; self.width];
                    self.scaled_add(&mut shadow, ann, &cur);
                    debug_assert_eq!(shadow[j], 0);
                    self.rows.insert(j, cur);
                    grew = true;
                    pending.push(shadow);
                }
            }
        }
        grew
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.width);
        let m = self.modulus;
        let mut cur: Vec<u64> = v.iter().map(|&x| x % m).collect();
        if m == 1 {
            return true;
        }
        loop {
            let Some(j) = cur.iter().position(|&x| x != 0) else {
                return true;
            };
            let Some(row) = self.rows.get(&j) else {
                return false;
            };
            let p = row[j];
            if cur[j] % p != 0 {
                return false;
            }
            let c = m - cur[j] / p;
            let row = row.clone();
            self.scaled_add(&mut cur, c, &row);
        }
    }

    /// Basis of the sub-span of vectors that vanish on the first `prefix`
    /// coordinates: exactly the rows whose pivot lies at or beyond `prefix`.
    pub fn vanishing_prefix_basis(&self, prefix: usize) -> Vec<Vec<u64>> {
        self.rows
            .range(prefix..)
            .map(|(_, row)| row.clone())
            .collect()
    }

    /// Enumerates all span elements if there are at most `cap`; the order is
    /// the coefficient odometer over the triangular basis (deterministic).
    pub fn enumerate(&self, cap: usize) -> Option<Vec<Vec<u64>>> {
        if self.size() > cap as u128 {
            return None;
        }
        let m = self.modulus;
        let rows: Vec<&Vec<u64>> = self.rows.values().collect();
        let orders: Vec<u64> = rows
            .iter()
            .map(|row| m / row.iter().find(|&&v| v != 0).copied().unwrap())
            .collect();
        let mut out = Vec::with_capacity(self.size() as usize);
        let mut coeffs = vec![0u64; rows.len()];
        loop {
            let mut v = vec![0u64; self.width];
            for (i, row) in rows.iter().enumerate() {
                self.scaled_add(&mut v, coeffs[i], row);
            }
            out.push(v);
            // odometer, last coefficient fastest
            let mut i = rows.len();
            loop {
                if i == 0 {
                    return Some(out);
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < orders[i] {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }
}
