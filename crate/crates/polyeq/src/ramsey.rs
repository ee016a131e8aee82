//! Provable upper bounds for multi-size hypergraph Ramsey numbers.
//!
//! `ramsey_upper(n, k, l)` returns a set size d such that every k-coloring
//! of the subsets of sizes 1..=n of a d-element set admits a subset of size
//! l that is monochromatic at every size. Exactness is not claimed; the
//! value is a sound upper bound built from
//!
//! * pigeonhole at size 1: `k·(l − 1) + 1`;
//! * an Erdős–Rado-style chain recursion at sizes s ≥ 2, reducing the
//!   s-uniform problem on a long enough vertex sequence to the
//!   (s−1)-uniform problem on its index set;
//! * composition across sizes: the size-s bound is applied to the target
//!   produced by the size-(s−1) bound, so each refinement stage hands a
//!   large enough monochromatic set to the next.
//!
//! Values grow as iterated exponentials; when the digits exceed the
//! configured bit budget the result degrades to a symbolic tower
//! description rather than an unbounded computation.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Bit budget for numeric Ramsey bounds; beyond it the value is symbolic.
pub const DEFAULT_RAMSEY_BIT_BUDGET: u64 = 1 << 16;

/// Cap on the chain length iterated by the s ≥ 2 recursion. A chain longer
/// than this cannot be walked step by step in reasonable time, and its
/// bound value exceeds any sane bit budget anyway.
pub const DEFAULT_CHAIN_CAP: usize = 1 << 21;

/// A Ramsey upper bound: either an exact big integer, or a symbolic
/// description of a tower-sized quantity that exceeded the bit budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Finite(BigUint),
    Symbolic(String),
}

impl Bound {
    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Symbolic(_) => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Bound::Symbolic(_))
    }

    /// The bound as a small integer, when it is finite and fits.
    pub fn to_usize(&self) -> Option<usize> {
        self.as_finite().and_then(|v| v.to_usize())
    }

    pub fn display(&self) -> String {
        match self {
            Bound::Finite(v) => v.to_string(),
            Bound::Symbolic(s) => s.clone(),
        }
    }
}

/// Compact description of a quantity too large to print in digits.
fn describe(v: &BigUint) -> String {
    if v.bits() <= 64 {
        v.to_string()
    } else {
        format!("~2^{}", v.bits() - 1)
    }
}

/// Binomial coefficient C(n, r) for small r, saturating at `u64::MAX`.
fn binomial_saturating(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Upper bound for the single-size problem: every k-coloring of the
/// s-element subsets of a set of the returned size has a monochromatic
/// subset of size l.
fn ramsey_single(s: usize, k: &BigUint, l: &BigUint, bit_budget: u64, chain_cap: usize) -> Bound {
    let one = BigUint::one();
    if s == 0 {
        // only the empty set is colored; any l-subset works
        return Bound::Finite(l.clone());
    }
    if k <= &one {
        // at most one color: every subset of size l is monochromatic
        return Bound::Finite(l.clone());
    }
    if let Some(lv) = l.to_usize() {
        if lv < s {
            // an l-set has no s-subsets, so it is vacuously monochromatic
            return Bound::Finite(l.clone());
        }
    }
    if s == 1 {
        // pigeonhole: k·(l−1) + 1 elements force l of one color
        let v = k * (l - &one) + &one;
        if v.bits() > bit_budget {
            return Bound::Symbolic(format!(
                "pigeonhole({} * ({} - 1) + 1)",
                describe(k),
                describe(l)
            ));
        }
        return Bound::Finite(v);
    }
    // s ≥ 2: build a vertex chain x_1 < … < x_t such that the color of any
    // s-set depends only on its first s−1 indices, then solve the induced
    // (s−1)-uniform problem on the chain. Chain length t must reach the
    // (s−1)-size bound for target l.
    let t_bound = ramsey_single(s - 1, k, l, bit_budget, chain_cap);
    let t = match &t_bound {
        Bound::Symbolic(inner) => {
            return Bound::Symbolic(format!("chain(s={}, k={}, t={})", s, describe(k), inner));
        }
        Bound::Finite(v) => match v.to_usize() {
            Some(t) if t <= chain_cap => t,
            _ => {
                return Bound::Symbolic(format!(
                    "chain(s={}, k={}, t={})",
                    s,
                    describe(k),
                    describe(v)
                ));
            }
        },
    };
    // need_i = candidate-set size required before picking x_i:
    // need_t = 1; need_i = 1 + k^C(i, s−1) · need_{i+1}, since after
    // picking x_i the candidates split into k^C(i, s−1) classes by the
    // colors of the s-sets they complete, and the largest class is kept.
    let mut need = BigUint::one();
    for i in (1..t).rev() {
        let exp = binomial_saturating(i, s - 1);
        // k^exp has at least exp bits (k ≥ 2), so a too-large exponent
        // already blows the budget without computing the power.
        if exp >= bit_budget || exp > u32::MAX as u64 {
            return Bound::Symbolic(format!(
                "chain(s={}, k={}, t={}, stalled at i={} with exponent C({},{})={})",
                s,
                describe(k),
                t,
                i,
                i,
                s - 1,
                exp
            ));
        }
        need = k.pow(exp as u32) * need + &one;
        if need.bits() > bit_budget {
            return Bound::Symbolic(format!(
                "chain(s={}, k={}, t={}, value exceeds {} bits at i={})",
                s,
                describe(k),
                t,
                bit_budget,
                i
            ));
        }
    }
    Bound::Finite(need)
}

/// Multi-size Ramsey upper bound with explicit budgets.
///
/// Composes the single-size bounds from size n innermost down to size 1
/// outermost: a set of the returned size yields (via the size-1 bound) a
/// subset monochromatic at size 1 that is still large enough for the
/// size-2 stage, and so on, ending with a size-l subset monochromatic at
/// every size 1..=n.
pub fn ramsey_upper_with_budget(
    n: usize,
    k: &BigUint,
    l: &BigUint,
    bit_budget: u64,
    chain_cap: usize,
) -> Bound {
    assert!(!k.is_zero(), "at least one color is required");
    assert!(!l.is_zero(), "target size must be positive");
    let mut current = Bound::Finite(l.clone());
    for s in (1..=n).rev() {
        current = match current {
            Bound::Finite(v) => ramsey_single(s, k, &v, bit_budget, chain_cap),
            Bound::Symbolic(inner) => Bound::Symbolic(format!(
                "R_{}(k={}, l={})",
                s,
                describe(k),
                inner
            )),
        };
    }
    current
}

/// Multi-size Ramsey upper bound with default budgets. See the module
/// documentation for the construction; `n = 0` returns `l`.
pub fn ramsey_upper(n: usize, k: &BigUint, l: &BigUint) -> Bound {
    ramsey_upper_with_budget(n, k, l, DEFAULT_RAMSEY_BIT_BUDGET, DEFAULT_CHAIN_CAP)
}

/// Convenience wrapper over machine-sized arguments.
pub fn ramsey_upper_usize(n: usize, k: usize, l: usize) -> Bound {
    ramsey_upper(n, &BigUint::from(k), &BigUint::from(l))
}
