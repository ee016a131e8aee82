//! Canonical product representation of a polynomial.
//!
//! An m-variable polynomial f over a nilpotent algebra with loop structure
//! factors as the left-associated product r_0 · r_1 ⋯ r_m, where
//! r_0 = f(0,…,0) and each r_{k+1} collects the 0-absorbing factors
//!
//!   t_S(x̄_↾S) = (r_0 · r_1 ⋯ r_k)(x̄_S) \ f(x̄_S),   |S| = k+1,
//!
//! grouped by the value t_S(b̄_↾S) following the domain enumeration, and
//! within a group by lexicographic order on S. The representation depends on
//! the enumeration and the base tuple b̄ and is deliberately not unique.
//!
//! When the algebra is supernilpotent with degree ν, every r_k with k ≥ ν is
//! equivalent to 0, so the recursion may stop at depth min(m, ν) without
//! losing the product identity.

use crate::algebra::{decode_index, table_index, Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::malcev::LoopStructure;
use crate::term::{term_table, Program, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Operation names added to the working signature for · and the divisions.
pub const LOOP_MUL: &str = "loop_mul";
pub const LOOP_LDIV: &str = "loop_ldiv";
pub const LOOP_RDIV: &str = "loop_rdiv";

/// Left-associated product term; the empty product is the loop neutral `#0`.
fn product_term(factors: &[Term], zero: Element) -> Term {
    let mut it = factors.iter();
    let Some(first) = it.next() else {
        return Term::Const(zero);
    };
    it.fold(first.clone(), |acc, t| {
        Term::apply(LOOP_MUL, vec![acc, t.clone()])
    })
}

/// One factor r_k, as an m-ary value table plus a printable term skeleton in
/// the loop-extended signature.
#[derive(Debug, Clone)]
pub struct Factor {
    pub term: Term,
    pub table: Vec<Element>,
}

/// A 0-absorbing factor t_S, as a |S|-ary table and term (variables of the
/// term are x1..x|S|, standing for x̄_↾S).
#[derive(Debug, Clone)]
pub struct AbsorbingFactor {
    /// 1-based variable indices, sorted.
    pub subset: Vec<usize>,
    pub term: Term,
    pub table: Vec<Element>,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub f: Term,
    pub m: usize,
    pub enumeration: Vec<Element>,
    pub base: Vec<Element>,
    /// r_0 .. r_depth.
    pub factors: Vec<Factor>,
    /// All t_S with 1 ≤ |S| ≤ depth, ordered by size then lexicographically.
    pub absorbing: Vec<AbsorbingFactor>,
    pub depth: usize,
    /// Supernilpotency degree justifying truncation, when known.
    pub nu: Option<usize>,
    /// True when depth < m without ν justification: factors beyond the depth
    /// were skipped and the product identity is unverified.
    pub truncated_unverified: bool,
    /// The input algebra extended with the loop operations; all factor terms
    /// are over this signature.
    pub extended: FiniteAlgebra,
}

fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    // lexicographic order on the sorted index vectors
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    if k == 0 || k > m {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next lex combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < m - (k - 1 - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Computes the Lemma-style decomposition of `f` with respect to the given
/// enumeration and base tuple.
///
/// `depth_cap` defaults to min(m, ν) when `nu` is given and to m otherwise.
pub fn decompose(
    algebra: &FiniteAlgebra,
    lp: &LoopStructure,
    f: &Term,
    enumeration: &[Element],
    base: &[Element],
    depth_cap: Option<usize>,
    nu: Option<usize>,
) -> Result<Decomposition> {
    let n = algebra.domain_size;
    let zero = lp.zero;
    if enumeration.len() != n {
        return Err(Error::BadInput(format!(
            "enumeration must list all {n} elements, got {}",
            enumeration.len()
        )));
    }
    {
        let mut seen = vec![false; n];
        for &a in enumeration {
            if a >= n || seen[a] {
                return Err(Error::BadInput(
                    "enumeration must be a permutation of the domain".into(),
                ));
            }
            seen[a] = true;
        }
    }
    let m = f.max_var();
    if base.len() != m {
        return Err(Error::BadInput(format!(
            "base tuple must have {m} entries, got {}",
            base.len()
        )));
    }
    if let Some(&bad) = base.iter().find(|&&v| v >= n) {
        return Err(Error::ElementOutOfRange {
            value: bad,
            domain: n,
        });
    }
    let extended = lp.extend_algebra(algebra, LOOP_MUL, LOOP_LDIV, LOOP_RDIV)?;
    let depth = depth_cap.unwrap_or_else(|| nu.map_or(m, |v| m.min(v)));
    let truncated_unverified = depth < m && nu.map_or(true, |v| depth < v);

    let f_table = term_table(f, &extended, m)?;
    let width = f_table.len();

    // r_0
    let r0_value = f_table[table_index(&vec![zero; m], n)];
    let mut factors = vec![Factor {
        term: Term::Const(r0_value),
        table: vec![r0_value; width],
    }];
    let mut absorbing: Vec<AbsorbingFactor> = Vec::new();

    // running product (r_0 ⋯ r_k) as an m-ary table
    let mut prod_table = factors[0].table.clone();

    for k in 0..depth {
        // t_S for all S of size k+1
        let mut level: Vec<AbsorbingFactor> = Vec::new();
        for subset in subsets_of_size(m, k + 1) {
            let s_arity = subset.len();
            let s_width = n.pow(s_arity as u32);
            let mut table = Vec::with_capacity(s_width);
            let mut restricted = vec![0; s_arity];
            let mut full = vec![zero; m];
            for idx in 0..s_width {
                decode_index(idx, n, &mut restricted);
                full.iter_mut().for_each(|v| *v = zero);
                for (j, &var) in subset.iter().enumerate() {
                    full[var - 1] = restricted[j];
                }
                let at = table_index(&full, n);
                table.push(lp.ldiv(prod_table[at], f_table[at]));
            }
            // term skeleton: (∏ r_i)(x̄_S) \ f(x̄_S), renumbered to x1..x|S|
            let mut renumber = vec![0usize; m];
            for (j, &var) in subset.iter().enumerate() {
                renumber[var - 1] = j + 1;
            }
            let mask = |t: &Term| t.masked(&subset, zero).renumbered(&renumber);
            let prod_skel = product_term(
                &factors.iter().map(|r| mask(&r.term)).collect::<Vec<_>>(),
                zero,
            );
            let term = Term::apply(LOOP_LDIV, vec![prod_skel, mask(f)]);
            level.push(AbsorbingFactor {
                subset,
                term,
                table,
            });
        }
        // r_{k+1}: group by t_S(b̄_↾S) in enumeration order, then lex on S
        // (the level is already lex-ordered)
        let mut ordered: Vec<&AbsorbingFactor> = Vec::with_capacity(level.len());
        for &a in enumeration {
            for t in &level {
                let b_restr: Vec<Element> =
                    t.subset.iter().map(|&var| base[var - 1]).collect();
                if t.table[table_index(&b_restr, n)] == a {
                    ordered.push(t);
                }
            }
        }
        debug_assert_eq!(ordered.len(), level.len());
        let mut r_table = vec![zero; width];
        let mut tuple = vec![0; m];
        for (idx, slot) in r_table.iter_mut().enumerate() {
            decode_index(idx, n, &mut tuple);
            for t in &ordered {
                let restricted: Vec<Element> =
                    t.subset.iter().map(|&var| tuple[var - 1]).collect();
                let v = t.table[table_index(&restricted, n)];
                *slot = lp.mul(*slot, v);
            }
        }
        let r_term = product_term(
            &ordered
                .iter()
                .map(|t| {
                    let back: Vec<usize> = t.subset.clone();
                    // t.term is over x1..x|S|; substitute x_j -> x_{S_j}
                    let mut map = vec![0usize; t.subset.len()];
                    map.copy_from_slice(&back);
                    t.term.renumbered(&map)
                })
                .collect::<Vec<_>>(),
            zero,
        );
        for (p, r) in prod_table.iter_mut().zip(&r_table) {
            *p = lp.mul(*p, *r);
        }
        factors.push(Factor {
            term: r_term,
            table: r_table,
        });
        absorbing.extend(level);
    }

    Ok(Decomposition {
        f: f.clone(),
        m,
        enumeration: enumeration.to_vec(),
        base: base.to_vec(),
        factors,
        absorbing,
        depth,
        nu,
        truncated_unverified,
        extended,
    })
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub pass: bool,
    /// Whether all tuples were checked (N^m ≤ exhaustive_limit).
    pub exhaustive: bool,
    /// Seed of the pseudorandom sample when not exhaustive.
    pub seed: u64,
    pub checked_tuples: usize,
    /// t_S evaluating nonzero on a zero-touching tuple.
    pub absorbing_failures: Vec<(Vec<usize>, Vec<Element>)>,
    /// tuples where ∏ r_i ≠ f.
    pub product_failures: Vec<Vec<Element>>,
    /// (k, tuple) where r_k ≠ 0 despite k ≥ ν.
    pub vanishing_failures: Vec<(usize, Vec<Element>)>,
}

/// Re-verifies a decomposition from its term skeletons (ignoring the cached
/// tables, so tampering is caught): absorbing property of every t_S, the
/// product identity ∏ r_i = f, and r_k ≡ 0 for k ≥ ν when ν is recorded.
///
/// Exhaustive when N^m ≤ exhaustive_limit, otherwise a seeded sample of
/// `exhaustive_limit` tuples.
pub fn verify_decomposition(
    d: &Decomposition,
    lp: &LoopStructure,
    exhaustive_limit: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let algebra = &d.extended;
    let n = algebra.domain_size;
    let zero = lp.zero;
    let mut report = VerificationReport {
        pass: true,
        exhaustive: true,
        seed,
        checked_tuples: 0,
        absorbing_failures: Vec::new(),
        product_failures: Vec::new(),
        vanishing_failures: Vec::new(),
    };

    // absorbing: exhaustive over each t_S's own arity
    for t in &d.absorbing {
        let arity = t.subset.len();
        let prog = Program::compile(&t.term, algebra)?;
        let s_width = n.pow(arity as u32);
        let mut tuple = vec![0; arity];
        for idx in 0..s_width {
            decode_index(idx, n, &mut tuple);
            if !tuple.contains(&zero) {
                continue;
            }
            if prog.eval_tuple(algebra, &tuple) != zero {
                report.absorbing_failures.push((t.subset.clone(), tuple.clone()));
                report.pass = false;
            }
        }
    }

    // product identity and vanishing, over full m-tuples
    let f_prog = Program::compile(&d.f, algebra)?;
    let factor_progs: Vec<Program> = d
        .factors
        .iter()
        .map(|r| Program::compile(&r.term, algebra))
        .collect::<Result<_>>()?;
    let width = (n as u128).pow(d.m as u32);
    let exhaustive = width <= exhaustive_limit as u128;
    report.exhaustive = exhaustive;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if exhaustive {
        width as usize
    } else {
        exhaustive_limit
    };
    let mut tuple = vec![0; d.m];
    for step in 0..count {
        if exhaustive {
            decode_index(step, n, &mut tuple);
        } else {
            for v in tuple.iter_mut() {
                *v = rng.gen_range(0..n);
            }
        }
        let mut prod = zero;
        for (k, prog) in factor_progs.iter().enumerate() {
            let v = prog.eval_tuple(algebra, &tuple);
            if let Some(nu) = d.nu {
                if k >= nu && v != zero {
                    report.vanishing_failures.push((k, tuple.clone()));
                    report.pass = false;
                }
            }
            prod = if k == 0 { v } else { lp.mul(prod, v) };
        }
        if prod != f_prog.eval_tuple(algebra, &tuple) {
            report.product_failures.push(tuple.clone());
            report.pass = false;
        }
        report.checked_tuples += 1;
    }
    if d.truncated_unverified {
        report.pass = false;
    }
    Ok(report)
}
