//! Congruence generation, higher commutators, and nilpotency degrees.
//!
//! The k-ary commutator [α_1,…,α_k] is computed by the cube construction:
//! generate the subuniverse of A^(2^k) spanned by the congruence cubes
//! (together with the diagonal constants, which arise from reflexive pairs),
//! read off the pairs (last coordinate, common value) from cubes constant on
//! all other coordinates, and close those pairs into a congruence.
//!
//! Cube subuniverses use the exact module engine when the algebra carries a
//! verified module structure; otherwise a generic breadth-first closure over
//! tuples runs within the `N^(2^k)` memory budget.

use std::collections::HashSet;

use crate::algebra::{checked_power, Element, FiniteAlgebra, ResolvedOp};
use crate::clone_closure::{absorbing_polynomials, span_close, CloneConfig};
use crate::error::{Error, Result};
use crate::linear::ZnSpan;
use crate::partition::{Partition, UnionFind};
use crate::structure::find_module_structure;

fn translation_ops<'a>(
    algebra: &'a FiniteAlgebra,
    template_max_arity: usize,
) -> Vec<ResolvedOp<'a>> {
    let mut ops: Vec<ResolvedOp<'a>> = algebra
        .operations
        .iter()
        .filter(|op| op.arity >= 1)
        .map(ResolvedOp::Table)
        .collect();
    if let Some(template) = &algebra.template {
        for arity in 1..=template_max_arity {
            ops.push(ResolvedOp::Template { template, arity });
        }
    }
    ops
}

/// Smallest congruence containing `pairs`: the closure of the pairs under all
/// unary polynomial translations of the basic operations.
pub fn congruence_generated(
    algebra: &FiniteAlgebra,
    pairs: &[(Element, Element)],
    config: &CloneConfig,
) -> Result<Partition> {
    let n = algebra.domain_size;
    for &(a, b) in pairs {
        for v in [a, b] {
            if v >= n {
                return Err(Error::ElementOutOfRange { value: v, domain: n });
            }
        }
    }
    let ops = translation_ops(algebra, config.template_max_arity);
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(Element, Element)> = Vec::new();
    for &(a, b) in pairs {
        uf.union(a, b);
        queue.push((a, b));
    }
    let mut args = Vec::new();
    while let Some((a, b)) = queue.pop() {
        for op in &ops {
            let r = op.arity();
            let others = n.pow((r - 1) as u32);
            for pos in 0..r {
                for rest in 0..others {
                    args.clear();
                    args.resize(r, 0);
                    let mut acc = rest;
                    for i in (0..r).rev() {
                        if i == pos {
                            continue;
                        }
                        args[i] = acc % n;
                        acc /= n;
                    }
                    args[pos] = a;
                    let fa = op.apply(&args, n);
                    args[pos] = b;
                    let fb = op.apply(&args, n);
                    if uf.union(fa, fb) {
                        queue.push((fa, fb));
                    }
                }
            }
        }
    }
    Ok(uf.into_partition())
}

/// The congruence cubes generating the subuniverse of A^(2^k): for each i and
/// each related pair (a,b) of `congruences[i]` (reflexive pairs included, so
/// the diagonal constants are among the generators), the tuple whose
/// coordinate at bit-vector J is `b` when bit i of J is set and `a` otherwise.
fn cube_generators(congruences: &[Partition], n: usize) -> Vec<Vec<Element>> {
    let k = congruences.len();
    let width = 1usize << k;
    let mut gens = Vec::new();
    for (i, alpha) in congruences.iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                if !alpha.related(a, b) {
                    continue;
                }
                let tuple: Vec<Element> = (0..width)
                    .map(|j| if j >> i & 1 == 1 { b } else { a })
                    .collect();
                gens.push(tuple);
            }
        }
    }
    gens
}

/// Generic breadth-first closure of tuple generators under the pointwise
/// basic operations, bounded by the `N^width` state-space budget.
fn subpower_closure_bfs(
    algebra: &FiniteAlgebra,
    width: usize,
    generators: &[Vec<Element>],
    config: &CloneConfig,
) -> Result<Vec<Vec<Element>>> {
    let n = algebra.domain_size;
    checked_power(n, width as u32, config.table_budget)?;
    let ops = translation_ops(algebra, config.template_max_arity);
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    let mut members: Vec<Vec<Element>> = Vec::new();
    for g in generators {
        if seen.insert(g.clone()) {
            members.push(g.clone());
        }
    }
    let mut frontier = 0usize;
    loop {
        let snapshot = members.len();
        if frontier == snapshot {
            break;
        }
        let old_frontier = frontier;
        frontier = snapshot;
        for op in &ops {
            let r = op.arity();
            let mut args_idx = vec![0usize; r];
            let mut arg_vals = vec![0usize; r];
            loop {
                if args_idx.iter().any(|&i| i >= old_frontier) {
                    let mut tuple = Vec::with_capacity(width);
                    for pos in 0..width {
                        for (slot, &i) in arg_vals.iter_mut().zip(&args_idx) {
                            *slot = members[i][pos];
                        }
                        tuple.push(op.apply(&arg_vals, n));
                    }
                    if seen.insert(tuple.clone()) {
                        members.push(tuple);
                    }
                }
                let mut i = r;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    args_idx[i] += 1;
                    if args_idx[i] < snapshot {
                        break;
                    }
                    args_idx[i] = 0;
                }
                if r == 0 || args_idx.iter().all(|&v| v == 0) {
                    break;
                }
            }
        }
    }
    Ok(members)
}

/// Pairs (last coordinate, common value) of cube-subuniverse members that are
/// constant on every coordinate except the all-ones one, read off the exact
/// module span without enumerating it: applying the linear change of
/// coordinates (w_1−w_0, …, w_{m−1}−w_0, w_0, w_last) turns "constant on the
/// first m coordinates" into a vanishing prefix.
fn constant_prefix_pairs_module(
    span: &ZnSpan,
    from_zn: &[Element],
    width: usize,
) -> Vec<(Element, Element)> {
    let n = span.modulus();
    let m = width - 1;
    let mut transformed = ZnSpan::new(n, m + 1);
    for row in span.basis() {
        let mut v = Vec::with_capacity(m + 1);
        for j in 1..m {
            v.push((row[j] + n - row[0]) % n);
        }
        v.push(row[0]);
        v.push(row[m]);
        transformed.insert(&v);
    }
    let mut pair_span = ZnSpan::new(n, 2);
    for row in transformed.vanishing_prefix_basis(m - 1) {
        pair_span.insert(&[row[m - 1], row[m]]);
    }
    pair_span
        .enumerate((n * n) as usize)
        .expect("pair span fits N^2")
        .into_iter()
        .map(|v| (from_zn[v[1] as usize], from_zn[v[0] as usize]))
        .collect()
}

/// The higher commutator [α_1,…,α_k] for k ≥ 2, via the cube construction.
pub fn commutator(
    algebra: &FiniteAlgebra,
    congruences: &[Partition],
    config: &CloneConfig,
) -> Result<Partition> {
    assert!(congruences.len() >= 2, "commutator needs at least two congruences");
    let n = algebra.domain_size;
    let k = congruences.len();
    let width = 1usize << k;
    let generators = cube_generators(congruences, n);
    let t_arities: Vec<usize> = if algebra.template.is_some() {
        (1..=config.template_max_arity).collect()
    } else {
        Vec::new()
    };
    let pairs = if let Some(group) = find_module_structure(algebra, &t_arities) {
        let (span, saturated) = span_close(
            algebra,
            &group,
            width,
            &generators,
            config.template_max_arity,
            config.work_budget,
        );
        if !saturated {
            return Err(Error::ClosureCapReached { cap: config.cap });
        }
        constant_prefix_pairs_module(&span, &group.from_zn, width)
    } else {
        let members = subpower_closure_bfs(algebra, width, &generators, config)?;
        let m = width - 1;
        members
            .iter()
            .filter(|t| t[1..m].iter().all(|&v| v == t[0]))
            .map(|t| (t[m], t[0]))
            .collect()
    };
    congruence_generated(algebra, &pairs, config)
}

/// Least n such that the chain γ_1 = [1,1], γ_{i+1} = [1, γ_i] reaches 0_A.
pub fn nilpotency_degree(
    algebra: &FiniteAlgebra,
    cap: usize,
    config: &CloneConfig,
) -> Result<usize> {
    let n = algebra.domain_size;
    let one = Partition::one(n);
    let mut gamma = one.clone();
    for degree in 1..=cap {
        gamma = commutator(algebra, &[one.clone(), gamma], config)?;
        if gamma.is_zero() {
            return Ok(degree);
        }
    }
    Err(Error::NilpotencyCapExceeded(cap))
}

#[derive(Debug, Clone)]
pub struct ArityStatus {
    pub arity: usize,
    /// The only 0-absorbing member found was the constant 0.
    pub only_zero: bool,
    pub saturated: bool,
}

#[derive(Debug, Clone)]
pub struct SupernilpotencyReport {
    /// Least arity at which every 0-absorbing polynomial is constant 0,
    /// certified by a saturated closure.
    pub degree: Option<usize>,
    pub per_arity: Vec<ArityStatus>,
    /// True when a capped closure prevented a definitive verdict at some
    /// arity; `degree: None` is then inconclusive rather than a disproof.
    pub indeterminate: bool,
}

/// Decides the supernilpotency degree ν(A) by the absorbing-polynomial
/// criterion, scanning arities 1..=max_arity.
pub fn supernilpotency_degree_absorbing(
    algebra: &FiniteAlgebra,
    max_arity: usize,
    config: &CloneConfig,
) -> Result<SupernilpotencyReport> {
    let zero = algebra.zero()?;
    let n = algebra.domain_size;
    let mut per_arity = Vec::new();
    let mut indeterminate = false;
    for arity in 1..=max_arity {
        let report = absorbing_polynomials(algebra, arity, config)?;
        let width = n.pow(arity as u32);
        let only_zero = report.tables.len() == 1 && report.tables[0] == vec![zero; width];
        per_arity.push(ArityStatus {
            arity,
            only_zero,
            saturated: report.saturated,
        });
        if only_zero && report.saturated && report.complete {
            return Ok(SupernilpotencyReport {
                degree: Some(arity),
                per_arity,
                indeterminate: false,
            });
        }
        // A nonzero absorbing member disqualifies this arity even when the
        // closure was capped; only an absence found without saturation is
        // inconclusive.
        if only_zero && !(report.saturated && report.complete) {
            indeterminate = true;
        }
    }
    Ok(SupernilpotencyReport {
        degree: None,
        per_arity,
        indeterminate,
    })
}
