//! Equation solvability and identity checking.
//!
//! An equation f = g over the loop-extended signature normalizes to
//! h = f / g, so solving means finding a zero of h. For supernilpotent
//! algebras a zero exists iff one exists on a support of bounded size: the
//! solver enumerates all supports T of size min(d, m) in colexicographic
//! order and all value assignments on T in odometer order, zeros elsewhere.
//! The verdict is exact when d ≥ m (full search); otherwise it is
//! conditional on the bound.
//!
//! The theoretical bound d comes from the Ramsey construction and is
//! usually astronomical; searches use a small practical bound (certified
//! empirically or supplied by the caller) or fall back to full support.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{checked_power, decode_index, Element, FiniteAlgebra};
use crate::clone_closure::{clone_closure, CloneClosure, CloneConfig};
use crate::decomposition::{LOOP_LDIV, LOOP_MUL, LOOP_RDIV};
use crate::error::Result;
use crate::malcev::LoopStructure;
use crate::ramsey::{ramsey_upper, Bound};
use crate::term::{Program, Term};

/// Theoretical bounds above this ceiling are never used for search.
pub const DEFAULT_PRACTICAL_CEILING: usize = 10;

/// h = f / g in the loop-extended signature: h(x̄) = 0 iff f(x̄) = g(x̄),
/// since right division by g yields the loop identity exactly on equality.
pub fn normalize(f: &Term, g: &Term) -> Term {
    Term::apply(LOOP_RDIV, vec![f.clone(), g.clone()])
}

/// The input algebra with the loop operations `loop_mul`, `loop_ldiv`,
/// `loop_rdiv` available as named operations (added if not already there).
pub fn loop_extended(algebra: &FiniteAlgebra, lp: &LoopStructure) -> Result<FiniteAlgebra> {
    if algebra.op(LOOP_MUL).is_some() {
        Ok(algebra.clone())
    } else {
        lp.extend_algebra(algebra, LOOP_MUL, LOOP_LDIV, LOOP_RDIV)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The witness assigns a value to x1..xm and evaluates h to 0.
    Solvable(Vec<Element>),
    Unsolvable,
    IdentityHolds,
    /// The witness evaluates h to the recorded nonzero value.
    IdentityFails {
        witness: Vec<Element>,
        value: Element,
    },
}

impl Verdict {
    /// True for solvable / identity-holds (CLI exit code 0).
    pub fn is_positive(&self) -> bool {
        matches!(self, Verdict::Solvable(_) | Verdict::IdentityHolds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Bounded-support enumeration (exact when the support covers all
    /// variables).
    Bounded,
    /// Full enumeration of all tuples.
    BruteForce,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub verdict: Verdict,
    pub mode: Mode,
    /// Support size actually enumerated: min(d_use, m).
    pub support_size: usize,
    /// True when the search provably covered all candidate assignments.
    pub exact: bool,
    pub evaluations: u64,
    pub elapsed: Duration,
}

/// All supports of size `s` within {1, …, m}, in colexicographic order.
fn colex_supports(m: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if s > m {
        return out;
    }
    let mut c: Vec<usize> = (1..=s).collect();
    loop {
        out.push(c.clone());
        // colex successor: bump the lowest slot with room before the next
        let mut i = 0;
        loop {
            if i == s {
                return out;
            }
            let limit = if i + 1 < s { c[i + 1] - 1 } else { m };
            if c[i] < limit {
                c[i] += 1;
                for (j, slot) in c.iter_mut().enumerate().take(i) {
                    *slot = j + 1;
                }
                break;
            }
            i += 1;
        }
    }
}

/// Bounded-support search for a zero of h (normalize first: target is 0).
///
/// Enumerates every support of size min(d_use, m) in colexicographic order
/// and every assignment of domain values on the support in odometer order
/// (remaining variables set to 0). The first zero found is the witness;
/// the verdict is exact iff d_use ≥ m.
pub fn solve(
    algebra: &FiniteAlgebra,
    lp: &LoopStructure,
    h: &Term,
    d_use: usize,
) -> Result<SolveReport> {
    let start = Instant::now();
    let ext = loop_extended(algebra, lp)?;
    let zero = ext.zero()?;
    let prog = Program::compile(h, &ext)?;
    let m = prog.max_var();
    let n = ext.domain_size;
    let s = d_use.min(m);
    let exact = d_use >= m;
    let mut evaluations = 0u64;
    let mut tuple = vec![zero; m];
    let mut values = vec![0usize; s];
    let combos = checked_power(n, s as u32, 1 << 40)?;
    for support in colex_supports(m, s) {
        for idx in 0..combos {
            decode_index(idx, n, &mut values);
            tuple.iter_mut().for_each(|v| *v = zero);
            for (slot, &var) in values.iter().zip(&support) {
                tuple[var - 1] = *slot;
            }
            evaluations += 1;
            if prog.eval_tuple(&ext, &tuple) == zero {
                return Ok(SolveReport {
                    verdict: Verdict::Solvable(tuple),
                    mode: Mode::Bounded,
                    support_size: s,
                    exact,
                    evaluations,
                    elapsed: start.elapsed(),
                });
            }
        }
    }
    Ok(SolveReport {
        verdict: Verdict::Unsolvable,
        mode: Mode::Bounded,
        support_size: s,
        exact,
        evaluations,
        elapsed: start.elapsed(),
    })
}

/// Identity check: h ≡ 0 iff none of the equations h / a = 0 (a ≠ 0) is
/// solvable. A witness for some a yields identity-fails with that value.
pub fn check_identity(
    algebra: &FiniteAlgebra,
    lp: &LoopStructure,
    h: &Term,
    d_use: usize,
) -> Result<SolveReport> {
    let start = Instant::now();
    let ext = loop_extended(algebra, lp)?;
    let zero = ext.zero()?;
    let m = h.max_var();
    let s = d_use.min(m);
    let mut evaluations = 0u64;
    let mut exact = true;
    for a in 0..ext.domain_size {
        if a == zero {
            continue;
        }
        let ha = normalize(h, &Term::Const(a));
        let report = solve(&ext, lp, &ha, d_use)?;
        evaluations += report.evaluations;
        exact &= report.exact;
        if let Verdict::Solvable(mut witness) = report.verdict {
            witness.resize(m, zero);
            let prog = Program::compile(h, &ext)?;
            assert_eq!(prog.eval_tuple(&ext, &witness), a);
            return Ok(SolveReport {
                verdict: Verdict::IdentityFails { witness, value: a },
                mode: Mode::Bounded,
                support_size: s,
                exact: report.exact,
                evaluations,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(SolveReport {
        verdict: Verdict::IdentityHolds,
        mode: Mode::Bounded,
        support_size: s,
        exact,
        evaluations,
        elapsed: start.elapsed(),
    })
}

/// Ground-truth solver: full enumeration of all N^m assignments, within
/// the given entry budget.
pub fn brute_force_solve(
    algebra: &FiniteAlgebra,
    lp: &LoopStructure,
    h: &Term,
    budget: u64,
) -> Result<SolveReport> {
    let start = Instant::now();
    let ext = loop_extended(algebra, lp)?;
    let zero = ext.zero()?;
    let prog = Program::compile(h, &ext)?;
    let m = prog.max_var();
    let n = ext.domain_size;
    let total = checked_power(n, m as u32, budget)?;
    let mut tuple = vec![zero; m];
    for idx in 0..total {
        decode_index(idx, n, &mut tuple);
        if prog.eval_tuple(&ext, &tuple) == zero {
            return Ok(SolveReport {
                verdict: Verdict::Solvable(tuple),
                mode: Mode::BruteForce,
                support_size: m,
                exact: true,
                evaluations: (idx + 1) as u64,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(SolveReport {
        verdict: Verdict::Unsolvable,
        mode: Mode::BruteForce,
        support_size: m,
        exact: true,
        evaluations: total as u64,
        elapsed: start.elapsed(),
    })
}

/// Ground-truth identity check by full enumeration.
pub fn brute_force_check_identity(
    algebra: &FiniteAlgebra,
    lp: &LoopStructure,
    h: &Term,
    budget: u64,
) -> Result<SolveReport> {
    let start = Instant::now();
    let ext = loop_extended(algebra, lp)?;
    let zero = ext.zero()?;
    let prog = Program::compile(h, &ext)?;
    let m = prog.max_var();
    let n = ext.domain_size;
    let total = checked_power(n, m as u32, budget)?;
    let mut tuple = vec![zero; m];
    for idx in 0..total {
        decode_index(idx, n, &mut tuple);
        let v = prog.eval_tuple(&ext, &tuple);
        if v != zero {
            return Ok(SolveReport {
                verdict: Verdict::IdentityFails {
                    witness: tuple,
                    value: v,
                },
                mode: Mode::BruteForce,
                support_size: m,
                exact: true,
                evaluations: (idx + 1) as u64,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(SolveReport {
        verdict: Verdict::IdentityHolds,
        mode: Mode::BruteForce,
        support_size: m,
        exact: true,
        evaluations: total as u64,
        elapsed: start.elapsed(),
    })
}

/// Where a practical search bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// The theoretical bound itself was small enough to use directly.
    TheoreticalIfSmall,
    /// Certified empirical support degree.
    Empirical,
    UserSupplied,
}

/// The quantities behind the support bound: for supernilpotency degree ν
/// and loop exponent e over an N-element domain, l = e·(ν−1)!,
/// k = e^(ν·N) and d is the multi-size Ramsey upper bound for
/// monochromatic l-subsets under k-colorings of subset sizes < ν.
#[derive(Debug, Clone)]
pub struct SupportBound {
    pub nu: usize,
    pub e: usize,
    pub l: BigUint,
    pub k: BigUint,
    pub d: Bound,
    /// Small bound actually usable for search, with its provenance.
    pub d_practical: Option<(usize, Provenance)>,
}

impl SupportBound {
    /// Support size to search with for an m-variable instance; exact
    /// (second component) when it covers all variables or the practical
    /// bound is certified/theoretical.
    pub fn effective(&self, m: usize) -> (usize, bool) {
        match self.d_practical {
            Some((d, provenance)) => {
                let certified = matches!(
                    provenance,
                    Provenance::Empirical | Provenance::TheoreticalIfSmall
                );
                (d.min(m), d >= m || certified)
            }
            None => (m, true),
        }
    }

    pub fn set_practical(&mut self, d: usize, provenance: Provenance) {
        self.d_practical = Some((d, provenance));
    }
}

fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Computes the support-bound quantities from a verified supernilpotency
/// degree `nu` and the derived loop; the practical bound is filled in only
/// when the theoretical d is itself at most `DEFAULT_PRACTICAL_CEILING`.
pub fn support_bound(algebra: &FiniteAlgebra, lp: &LoopStructure, nu: usize) -> SupportBound {
    assert!(nu >= 1, "supernilpotency degree must be positive");
    let e = lp.exponent;
    let n_elems = algebra.domain_size;
    let l = BigUint::from(e) * factorial(nu - 1);
    let k = BigUint::from(e).pow((nu * n_elems) as u32);
    let d = ramsey_upper(nu - 1, &k, &l);
    let d_practical = d
        .to_usize()
        .filter(|&v| v <= DEFAULT_PRACTICAL_CEILING)
        .map(|v| (v, Provenance::TheoreticalIfSmall));
    SupportBound {
        nu,
        e,
        l,
        k,
        d,
        d_practical,
    }
}

/// Configuration for the empirical support-degree search.
#[derive(Debug, Clone)]
pub struct SupportDegreeConfig {
    /// Highest clone arity scanned (m₀).
    pub max_arity: usize,
    /// Clone members are enumerated exhaustively up to this count.
    pub member_cap: usize,
    /// Tuples are enumerated exhaustively up to this count.
    pub tuple_cap: usize,
    /// Sample size for members/tuples beyond the caps.
    pub samples: usize,
    pub seed: u64,
    pub clone_config: CloneConfig,
}

impl Default for SupportDegreeConfig {
    fn default() -> Self {
        SupportDegreeConfig {
            max_arity: 4,
            member_cap: 1 << 17,
            tuple_cap: 1 << 16,
            samples: 2000,
            seed: 0,
            clone_config: CloneConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeStatus {
    /// d′ is a proven support bound for every polynomial of arity ≤ m₀:
    /// either all closures saturated and were scanned exhaustively, or the
    /// observed degree equals m₀ (full support always interpolates).
    CertifiedUpToArity(usize),
    /// Sampling or unsaturated closures were involved and the observed
    /// degree is below the scanned arity; not a proven bound.
    Heuristic,
}

#[derive(Debug, Clone)]
pub struct SupportDegree {
    /// Least d′ such that no scanned (member, tuple) pair needs a larger
    /// support to reproduce its value.
    pub d: usize,
    pub status: DegreeStatus,
    pub seed: u64,
    pub members_checked: u64,
}

/// Least support size that reproduces `prog(tuple)` with the off-support
/// variables zeroed; at most tuple.len() (the full support).
pub fn min_support_size(
    algebra: &FiniteAlgebra,
    prog: &Program,
    tuple: &[Element],
    zero: Element,
) -> usize {
    let m = tuple.len();
    let target = prog.eval_tuple(algebra, tuple);
    let mut best = m;
    let mut masked = vec![zero; m];
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        for (i, slot) in masked.iter_mut().enumerate() {
            *slot = if mask & (1 << i) != 0 { tuple[i] } else { zero };
        }
        if prog.eval_tuple(algebra, &masked) == target {
            best = size;
        }
    }
    best
}

fn min_support_size_table(
    table: &[Element],
    tuple_idx: usize,
    n: usize,
    arity: usize,
    zero: Element,
) -> usize {
    let mut digits = vec![0usize; arity];
    decode_index(tuple_idx, n, &mut digits);
    let target = table[tuple_idx];
    let mut best = arity;
    for mask in 0u32..(1u32 << arity) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut idx = 0usize;
        for (i, &digit) in digits.iter().enumerate() {
            let v = if mask & (1 << (arity - 1 - i)) != 0 {
                digit
            } else {
                zero
            };
            idx = idx * n + v;
        }
        if table[idx] == target {
            best = size;
        }
    }
    best
}

/// Searches for the least support degree d′ with no counterexample among
/// the scanned clone members and tuples, per arity 1..=m₀.
///
/// Certification: when every closure saturates and members and tuples were
/// enumerated exhaustively, d′ is a proven bound for arities ≤ m₀. The
/// observed degree d′ = m₀ is likewise proven (full support always works).
/// Anything involving sampling with d′ < m₀ is flagged heuristic.
pub fn empirical_support_degree(
    algebra: &FiniteAlgebra,
    config: &SupportDegreeConfig,
) -> Result<SupportDegree> {
    let zero = algebra.zero()?;
    let n = algebra.domain_size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut d = 0usize;
    let mut all_exhaustive = true;
    let mut members_checked = 0u64;
    for arity in 1..=config.max_arity {
        let closure = clone_closure(algebra, arity, &config.clone_config)?;
        let width = n.pow(arity as u32);
        let (tables, members_exhaustive): (Vec<Vec<Element>>, bool) = match &closure {
            CloneClosure::Enumerated(r) => (r.tables.clone(), r.saturated),
            CloneClosure::Module(mc) => {
                if mc.size() <= config.member_cap as u128 {
                    let rows = mc
                        .span
                        .enumerate(config.member_cap)
                        .expect("size fits the cap");
                    let tables = rows
                        .into_iter()
                        .map(|row| {
                            row.into_iter()
                                .map(|k| mc.group.from_zn[k as usize])
                                .collect()
                        })
                        .collect();
                    (tables, mc.saturated)
                } else {
                    // random span combinations: coefficients per basis row
                    let basis: Vec<Vec<u64>> = mc.span.basis().cloned().collect();
                    let modulus = mc.span.modulus();
                    let mut tables = Vec::with_capacity(config.samples);
                    for _ in 0..config.samples {
                        let mut acc = vec![0u64; width];
                        for row in &basis {
                            let c = rng.gen_range(0..modulus);
                            for (slot, &v) in acc.iter_mut().zip(row) {
                                *slot = (*slot + c * v) % modulus;
                            }
                        }
                        tables.push(
                            acc.into_iter()
                                .map(|k| mc.group.from_zn[k as usize])
                                .collect(),
                        );
                    }
                    (tables, false)
                }
            }
        };
        let tuple_indices: Vec<usize> = if width <= config.tuple_cap {
            (0..width).collect()
        } else {
            all_exhaustive = false;
            (0..config.samples).map(|_| rng.gen_range(0..width)).collect()
        };
        all_exhaustive &= members_exhaustive && closure.saturated();
        for table in &tables {
            members_checked += 1;
            for &idx in &tuple_indices {
                let need = min_support_size_table(table, idx, n, arity, zero);
                if need > d {
                    d = need;
                }
            }
        }
    }
    let status = if all_exhaustive || d == config.max_arity {
        DegreeStatus::CertifiedUpToArity(config.max_arity)
    } else {
        DegreeStatus::Heuristic
    };
    Ok(SupportDegree {
        d,
        status,
        seed: config.seed,
        members_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::malcev::derive_loop;
    use crate::term::parse_term;

    fn z4_loop() -> (FiniteAlgebra, LoopStructure) {
        let alg = fixtures::cyclic_group(4);
        let m = parse_term("plus(x1, plus(neg(x2), x3))", &alg).unwrap();
        let lp = derive_loop(&alg, &m, 0).unwrap();
        (alg, lp)
    }

    fn z9_loop() -> (FiniteAlgebra, LoopStructure) {
        let alg = fixtures::z9_f2();
        let m = parse_term("plus(x1, plus(neg(x2), x3))", &alg).unwrap();
        let lp = derive_loop(&alg, &m, 0).unwrap();
        (alg, lp)
    }

    #[test]
    fn colex_order_is_canonical() {
        assert_eq!(
            colex_supports(4, 2),
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 4],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(colex_supports(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(colex_supports(2, 3), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn normalize_zero_iff_equal() {
        let (alg, lp) = z4_loop();
        let ext = loop_extended(&alg, &lp).unwrap();
        let f = parse_term("plus(x1, x2)", &ext).unwrap();
        let g = parse_term("plus(x2, x1)", &ext).unwrap();
        let h = normalize(&f, &g);
        let prog = Program::compile(&h, &ext).unwrap();
        for idx in 0..16 {
            let mut t = vec![0; 2];
            decode_index(idx, 4, &mut t);
            assert_eq!(prog.eval_tuple(&ext, &t), 0);
        }
        // f = x1, g = #0: h acts as x1
        let h = normalize(
            &parse_term("x1", &ext).unwrap(),
            &parse_term("#0", &ext).unwrap(),
        );
        let prog = Program::compile(&h, &ext).unwrap();
        for x in 0..4 {
            assert_eq!(prog.eval_tuple(&ext, &[x]), x);
        }
        // f = #1, g = #3: constant 1 − 3 mod 4 = 2
        let h = normalize(
            &parse_term("#1", &ext).unwrap(),
            &parse_term("#3", &ext).unwrap(),
        );
        let prog = Program::compile(&h, &ext).unwrap();
        assert_eq!(prog.eval_tuple(&ext, &[]), 2);
    }

    #[test]
    fn solve_identity_term() {
        let (alg, lp) = z4_loop();
        let ext = loop_extended(&alg, &lp).unwrap();
        let h = normalize(
            &parse_term("x1", &ext).unwrap(),
            &parse_term("x1", &ext).unwrap(),
        );
        let report = solve(&alg, &lp, &h, 10).unwrap();
        assert_eq!(report.verdict, Verdict::Solvable(vec![0]));
        assert!(report.exact);
    }

    #[test]
    fn solve_x1_over_z4() {
        let (alg, lp) = z4_loop();
        let h = parse_term("x1", &alg).unwrap();
        let report = brute_force_solve(&alg, &lp, &h, 1 << 20).unwrap();
        assert_eq!(report.verdict, Verdict::Solvable(vec![0]));
        let bounded = solve(&alg, &lp, &h, 0).unwrap();
        assert_eq!(bounded.verdict, Verdict::Solvable(vec![0]));
        assert!(!bounded.exact);
    }

    #[test]
    fn unsolvable_constant() {
        let (alg, lp) = z4_loop();
        let h = parse_term("#2", &alg).unwrap();
        let report = solve(&alg, &lp, &h, 3).unwrap();
        assert_eq!(report.verdict, Verdict::Unsolvable);
        assert!(report.exact, "m = 0 makes any bound exact");
    }

    #[test]
    fn bounded_agrees_with_brute_force_on_full_support() {
        let (alg, lp) = z9_loop();
        let terms = [
            "f@2(x1, x2)",
            "plus(f@2(x1, x2), x3)",
            "plus(f@2(x1, x1), #3)",
            "neg(f@2(x2, x3))",
        ];
        for src in terms {
            let f = parse_term(src, &alg).unwrap();
            for target in ["#0", "#3", "#1", "x1"] {
                let g = parse_term(target, &alg).unwrap();
                let h = normalize(&f, &g);
                let m = h.max_var();
                let a = solve(&alg, &lp, &h, m).unwrap();
                let b = brute_force_solve(&alg, &lp, &h, 1 << 24).unwrap();
                assert_eq!(
                    a.verdict, b.verdict,
                    "disagreement on {src} = {target}"
                );
            }
        }
    }

    #[test]
    fn identity_checks() {
        let (alg, lp) = z9_loop();
        // f@2(x1, x2) is 0-absorbing but not the zero polynomial
        let h = parse_term("f@2(x1, x2)", &alg).unwrap();
        let report = check_identity(&alg, &lp, &h, 2).unwrap();
        match &report.verdict {
            Verdict::IdentityFails { witness, value } => {
                assert_eq!(witness, &vec![1, 1]);
                assert_eq!(*value, 3);
            }
            other => panic!("expected identity-fails, got {other:?}"),
        }
        // x1 \ x1 never deviates from 0
        let ext = loop_extended(&alg, &lp).unwrap();
        let h = parse_term("loop_ldiv(x1, x1)", &ext).unwrap();
        let report = check_identity(&ext, &lp, &h, 1).unwrap();
        assert_eq!(report.verdict, Verdict::IdentityHolds);
        let brute = brute_force_check_identity(&ext, &lp, &h, 1 << 20).unwrap();
        assert_eq!(brute.verdict, Verdict::IdentityHolds);
    }

    #[test]
    fn support_bound_z4() {
        let (alg, lp) = z4_loop();
        let sb = support_bound(&alg, &lp, 2);
        assert_eq!(sb.e, 4);
        assert_eq!(sb.l, BigUint::from(4u32));
        assert_eq!(sb.k, BigUint::from(65536u32));
        assert_eq!(sb.d.as_finite().unwrap(), &BigUint::from(196609u32));
        assert!(sb.d_practical.is_none(), "196609 exceeds the ceiling");
        assert!(sb.d.as_finite().unwrap() >= &sb.l);
    }

    #[test]
    fn support_bound_trivial_algebra() {
        let alg = fixtures::trivial();
        let m = parse_term("x2", &alg).unwrap();
        // m(x,y,z) = y is Mal'cev on one element
        let lp = derive_loop(&alg, &m, 0).unwrap();
        let sb = support_bound(&alg, &lp, 1);
        assert_eq!(sb.e, 1);
        assert_eq!(sb.l, BigUint::one());
        assert_eq!(sb.k, BigUint::one());
        assert_eq!(sb.d.as_finite().unwrap(), &BigUint::one());
        assert_eq!(sb.d_practical, Some((1, Provenance::TheoreticalIfSmall)));
    }

    #[test]
    fn support_bound_z9_tower() {
        let (alg, lp) = z9_loop();
        let sb = support_bound(&alg, &lp, 3);
        assert_eq!(sb.e, 9);
        assert_eq!(sb.l, BigUint::from(18u32));
        assert_eq!(sb.k, BigUint::from(9u32).pow(27));
        assert!(sb.d.is_symbolic(), "d should be a tower: {:?}", sb.d);
        assert!(sb.d_practical.is_none());
    }

    #[test]
    fn empirical_degree_z4() {
        let alg = fixtures::cyclic_group(4);
        let report = empirical_support_degree(&alg, &SupportDegreeConfig::default()).unwrap();
        assert_eq!(report.d, 3);
        assert_eq!(report.status, DegreeStatus::CertifiedUpToArity(4));
    }

    #[test]
    fn empirical_degree_trivial() {
        let alg = fixtures::trivial();
        let report = empirical_support_degree(&alg, &SupportDegreeConfig::default()).unwrap();
        assert_eq!(report.d, 0);
        assert_eq!(report.status, DegreeStatus::CertifiedUpToArity(4));
    }

    #[test]
    fn empirical_degree_z9() {
        let alg = fixtures::z9_f2();
        let report = empirical_support_degree(&alg, &SupportDegreeConfig::default()).unwrap();
        // 3·x1x2 + 3·x3x4 at (1,1,1,1) needs its full support, so the
        // certified degree at arity 4 is 4
        assert_eq!(report.d, 4);
        assert_eq!(report.status, DegreeStatus::CertifiedUpToArity(4));
    }

    #[test]
    fn min_support_size_matches_table_variant() {
        let alg = fixtures::z9_f2();
        let f = parse_term("plus(f@2(x1, x2), x3)", &alg).unwrap();
        let prog = Program::compile(&f, &alg).unwrap();
        let table = crate::term::term_table(&f, &alg, 3).unwrap();
        for idx in 0..729 {
            let mut t = vec![0; 3];
            decode_index(idx, 9, &mut t);
            assert_eq!(
                min_support_size(&alg, &prog, &t, 0),
                min_support_size_table(&table, idx, 9, 3, 0)
            );
        }
    }
}
