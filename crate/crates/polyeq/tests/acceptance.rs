//! Acceptance gate: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::time::Instant;

use num_bigint::BigUint;
use polyeq::algebra::decode_index;
use polyeq::clone_closure::CloneConfig;
use polyeq::commutator::{commutator, nilpotency_degree, supernilpotency_degree_absorbing};
use polyeq::decomposition::{decompose, verify_decomposition};
use polyeq::fixtures;
use polyeq::hardness::{build_ap, p_colorable, reduce_graph, GraphInstance};
use polyeq::partition::Partition;
use polyeq::ramsey::{ramsey_upper_usize, Bound};
use polyeq::solver::{
    brute_force_solve, empirical_support_degree, loop_extended, min_support_size, normalize,
    solve, support_bound, DegreeStatus, SupportDegreeConfig, Verdict,
};
use polyeq::term::{Program, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{additive_loop, random_term};

const CORPUS_SEED: u64 = 0xC0FFEE;
const CORPUS_MAX_VARS: usize = 4;
const CORPUS_MAX_LEN: usize = 30;

fn corpus(algebra: &polyeq::algebra::FiniteAlgebra, count: usize, max_vars: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..count)
        .map(|_| random_term(algebra, &mut rng, max_vars, CORPUS_MAX_LEN))
        .collect()
}

/// Criterion 1: bounded solve with full support agrees with the
/// brute-force oracle on ≥ 500 seeded random terms over both fixtures.
#[test]
fn criterion_1_solver_oracle_equivalence() {
    let start = Instant::now();
    let mut instances = 0usize;
    for algebra in [fixtures::cyclic_group(4), fixtures::z9_f2()] {
        let lp = additive_loop(&algebra);
        for h in corpus(&algebra, 300, CORPUS_MAX_VARS) {
            let m = h.max_var();
            let full = solve(&algebra, &lp, &h, m).unwrap();
            let oracle = brute_force_solve(&algebra, &lp, &h, 1 << 24).unwrap();
            assert_eq!(
                full.verdict, oracle.verdict,
                "bounded/oracle disagreement on {h}"
            );
            assert!(full.exact);
            if let Verdict::Solvable(w) = &full.verdict {
                let ext = loop_extended(&algebra, &lp).unwrap();
                let prog = Program::compile(&h, &ext).unwrap();
                assert_eq!(prog.eval_tuple(&ext, w), 0, "witness fails on {h}");
            }
            instances += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(instances >= 500, "corpus too small: {instances}");
    assert!(elapsed.as_secs() < 60, "too slow: {elapsed:?}");
    println!(
        "ACCEPTANCE 1: PASS — {instances} random terms, full-support solve ≡ brute force, {:.1}s",
        elapsed.as_secs_f64()
    );
}

/// Criterion 2: over the 9-element reduct, every corpus term takes each of
/// its values on a support of size ≤ the certified empirical degree.
#[test]
fn criterion_2_certified_support_degree() {
    let algebra = fixtures::z9_f2();
    let degree = empirical_support_degree(&algebra, &SupportDegreeConfig::default()).unwrap();
    assert_eq!(
        degree.status,
        DegreeStatus::CertifiedUpToArity(4),
        "criterion needs a certified degree"
    );
    let d_prime = degree.d;
    let n = algebra.domain_size;
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 0x2);
    let mut checked = 0u64;
    for h in corpus(&algebra, 300, CORPUS_MAX_VARS) {
        let m = h.max_var();
        let prog = Program::compile(&h, &algebra).unwrap();
        let mut tuple = vec![0usize; m];
        if m <= 3 {
            for idx in 0..n.pow(m as u32) {
                decode_index(idx, n, &mut tuple);
                let need = min_support_size(&algebra, &prog, &tuple, 0);
                assert!(need <= d_prime, "support {need} > d'={d_prime} on {h} at {tuple:?}");
                checked += 1;
            }
        } else {
            for _ in 0..1000 {
                for slot in tuple.iter_mut() {
                    *slot = rng.gen_range(0..n);
                }
                let need = min_support_size(&algebra, &prog, &tuple, 0);
                assert!(need <= d_prime, "support {need} > d'={d_prime} on {h} at {tuple:?}");
                checked += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE 2: PASS — certified d'={d_prime} (arity ≤ 4), {checked} (term, tuple) pairs, zero failures"
    );
}

/// Criterion 3: 100 random decompositions over the 9-element reduct verify
/// exhaustively (absorbing factors, product identity, vanishing above ν).
#[test]
fn criterion_3_decomposition_verification() {
    let algebra = fixtures::z9_f2();
    let lp = additive_loop(&algebra);
    let config = CloneConfig::default();
    let sn = supernilpotency_degree_absorbing(&algebra, 4, &config).unwrap();
    assert_eq!(sn.degree, Some(3));
    let enumeration: Vec<usize> = (0..9).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 0x3);
    let mut count = 0usize;
    while count < 100 {
        let f = random_term(&algebra, &mut rng, 3, CORPUS_MAX_LEN);
        let m = f.max_var();
        let base: Vec<usize> = (0..m).map(|_| rng.gen_range(0..9)).collect();
        let d = decompose(&algebra, &lp, &f, &enumeration, &base, None, sn.degree).unwrap();
        let report = verify_decomposition(&d, &lp, 1 << 16, count as u64).unwrap();
        assert!(report.exhaustive, "9^m ≤ 729 must be exhaustive");
        assert!(
            report.pass,
            "verification failed for {f} with base {base:?}: {report:?}"
        );
        count += 1;
    }
    println!("ACCEPTANCE 3: PASS — 100 random decompositions verified exhaustively, zero failures");
}

/// Criterion 4: commutator structure values on the fixtures.
#[test]
fn criterion_4_structure_tests() {
    let config = CloneConfig::default();
    for n in [4usize, 9] {
        let g = fixtures::cyclic_group(n);
        let one = Partition::one(n);
        let c = commutator(&g, &[one.clone(), one], &config).unwrap();
        assert!(c.is_zero(), "[1,1] must be 0 on the cyclic group of order {n}");
    }
    let a3 = fixtures::z9_f2();
    let one = Partition::one(9);
    let c11 = commutator(&a3, &[one.clone(), one.clone()], &config).unwrap();
    let cosets = Partition::from_pairs(9, &[(0, 3), (3, 6), (1, 4), (4, 7), (2, 5), (5, 8)]);
    assert_eq!(c11, cosets, "[1,1] must have the cosets of {{0,3,6}} as classes");
    let c111 = commutator(&a3, &[one.clone(), one.clone(), one], &config).unwrap();
    assert!(c111.is_zero(), "[1,1,1] must be 0 on the reduct");
    let d8 = fixtures::dihedral_8();
    assert_eq!(nilpotency_degree(&d8, 8, &config).unwrap(), 2);
    let sn4 = supernilpotency_degree_absorbing(&fixtures::cyclic_group(4), 4, &config).unwrap();
    assert_eq!(sn4.degree, Some(2));
    assert!(!sn4.indeterminate);
    assert!(sn4.per_arity.iter().all(|a| a.saturated));
    let sn9 = supernilpotency_degree_absorbing(&a3, 4, &config).unwrap();
    assert_eq!(sn9.degree, Some(3));
    assert!(!sn9.indeterminate);
    assert!(sn9.per_arity.iter().all(|a| a.saturated));
    println!(
        "ACCEPTANCE 4: PASS — [1,1] and [1,1,1] values, nilpotency(D8)=2, ν(Z4)=2, ν(Z9 reduct)=3, all saturated"
    );
}

/// Criterion 5: over A_3, solvability of t_G = 3 coincides with brute-force
/// 3-colorability for every graph on ≤ 4 vertices plus the 5-cycle, and
/// every t_G value is 0 or 3.
#[test]
fn criterion_5_reduction_correspondence() {
    let ap = build_ap(3).unwrap();
    let mut graphs: Vec<GraphInstance> = Vec::new();
    for v in 2..=4usize {
        let pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| ((a + 1)..v).map(move |b| (a, b)))
            .collect();
        for mask in 1u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            graphs.push(GraphInstance::new(v, edges).unwrap());
        }
    }
    graphs.push(GraphInstance::cycle(5));
    let total = graphs.len();
    for g in graphs {
        let t = reduce_graph(&g, 3).unwrap();
        let prog = Program::compile(&t, &ap.algebra).unwrap();
        let mut tuple = vec![0usize; g.vertices];
        let mut solvable = false;
        for idx in 0..9usize.pow(g.vertices as u32) {
            decode_index(idx, 9, &mut tuple);
            let v = prog.eval_tuple(&ap.algebra, &tuple);
            assert!(v == 0 || v == 3, "dichotomy violated: {v} on {g:?}");
            solvable |= v == 3;
        }
        let colorable = p_colorable(&g, 3, 1 << 20).unwrap();
        assert_eq!(solvable, colorable, "correspondence failed on {g:?}");
    }
    println!(
        "ACCEPTANCE 5: PASS — {total} graphs: t_G = 3 solvable ⇔ 3-colorable, all values in {{0, 3}}"
    );
}

/// Criterion 6: the derived loops satisfy the loop axioms exhaustively and
/// have the expected exponents.
#[test]
fn criterion_6_loop_correctness() {
    for (algebra, expected_e) in [(fixtures::cyclic_group(4), 4), (fixtures::cyclic_group(9), 9)] {
        let lp = additive_loop(&algebra);
        let n = lp.n;
        for x in 0..n {
            assert_eq!(lp.mul(lp.zero, x), x);
            assert_eq!(lp.mul(x, lp.zero), x);
            for y in 0..n {
                assert_eq!(lp.mul(x, lp.ldiv(x, y)), y);
                assert_eq!(lp.ldiv(x, lp.mul(x, y)), y);
                assert_eq!(lp.mul(lp.rdiv(y, x), x), y);
                assert_eq!(lp.rdiv(lp.mul(y, x), x), y);
            }
        }
        assert_eq!(lp.exponent, expected_e);
        for x in 0..n {
            assert_eq!(lp.left_power(x, lp.exponent), lp.zero);
        }
        for k in 1..lp.exponent {
            assert!(
                (0..n).any(|x| lp.left_power(x, k) != lp.zero),
                "exponent not minimal at {k}"
            );
        }
    }
    println!("ACCEPTANCE 6: PASS — loop axioms exhaustive on Z4 and Z9, e = 4 and 9");
}

/// Criterion 7: the support-bound arithmetic and the Ramsey upper bound.
#[test]
fn criterion_7_bound_plumbing() {
    let z4 = fixtures::cyclic_group(4);
    let lp = additive_loop(&z4);
    let sb = support_bound(&z4, &lp, 2);
    assert_eq!(sb.e, 4);
    assert_eq!(sb.l, BigUint::from(4u32));
    assert_eq!(sb.k, BigUint::from(65536u32));
    assert_eq!(sb.d.as_finite().unwrap(), &BigUint::from(196609u32));

    // size 1 is the pigeonhole value exactly
    for k in 2..6usize {
        for l in 1..6usize {
            assert_eq!(
                ramsey_upper_usize(1, k, l).as_finite().unwrap(),
                &BigUint::from(k * (l - 1) + 1)
            );
        }
    }

    // in-suite brute force: R(3,3) = 6, and the size-2 bound dominates it
    fn has_mono_triangle(vertices: usize, coloring: u32) -> bool {
        let mut edge = vec![vec![0u32; vertices]; vertices];
        let mut bit = 0;
        for u in 0..vertices {
            for v in (u + 1)..vertices {
                let c = (coloring >> bit) & 1;
                edge[u][v] = c;
                edge[v][u] = c;
                bit += 1;
            }
        }
        for a in 0..vertices {
            for b in (a + 1)..vertices {
                for c in (b + 1)..vertices {
                    if edge[a][b] == edge[b][c] && edge[b][c] == edge[a][c] {
                        return true;
                    }
                }
            }
        }
        false
    }
    assert!((0..1u32 << 10).any(|c| !has_mono_triangle(5, c)));
    assert!((0..1u32 << 15).all(|c| has_mono_triangle(6, c)));
    let bound = ramsey_upper_usize(2, 2, 3);
    assert!(bound.as_finite().unwrap() >= &BigUint::from(6u32));

    // monotone in each argument on a small grid (symbolic counts as +inf)
    let ge = |a: &Bound, b: &Bound| match (a, b) {
        (Bound::Symbolic(_), _) => true,
        (Bound::Finite(_), Bound::Symbolic(_)) => false,
        (Bound::Finite(x), Bound::Finite(y)) => x >= y,
    };
    for n in 0..3usize {
        for k in 1..4usize {
            for l in 1..5usize {
                let base = ramsey_upper_usize(n, k, l);
                assert!(ge(&ramsey_upper_usize(n + 1, k, l), &base));
                assert!(ge(&ramsey_upper_usize(n, k + 1, l), &base));
                assert!(ge(&ramsey_upper_usize(n, k, l + 1), &base));
            }
        }
    }
    println!(
        "ACCEPTANCE 7: PASS — support_bound(Z4) = (l=4, k=65536, d=196609), pigeonhole exact, bound ≥ R(3,3)=6, monotone"
    );
}

/// Criterion 8: normalization is sound — f and g agree exactly where f/g
/// is 0, exhaustively over all tuples, for 200 random pairs per fixture.
#[test]
fn criterion_8_normalization_soundness() {
    let d8_malcev =
        |alg: &polyeq::algebra::FiniteAlgebra| {
            let m = polyeq::term::parse_term("mul(x1,mul(inv(x2),x3))", alg).unwrap();
            polyeq::malcev::derive_loop(alg, &m, 0).unwrap()
        };
    let cases = [
        (fixtures::cyclic_group(4), None),
        (fixtures::z9_f2(), None),
        (fixtures::dihedral_8(), Some(())),
    ];
    let mut total = 0u64;
    for (algebra, nonabelian) in cases {
        let lp = if nonabelian.is_some() {
            d8_malcev(&algebra)
        } else {
            additive_loop(&algebra)
        };
        let ext = loop_extended(&algebra, &lp).unwrap();
        let n = ext.domain_size;
        let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 0x8);
        for _ in 0..200 {
            let f = random_term(&algebra, &mut rng, 3, CORPUS_MAX_LEN);
            let g = random_term(&algebra, &mut rng, 3, CORPUS_MAX_LEN);
            let h = normalize(&f, &g);
            let m = h.max_var();
            let pf = Program::compile(&f, &ext).unwrap();
            let pg = Program::compile(&g, &ext).unwrap();
            let ph = Program::compile(&h, &ext).unwrap();
            let mut tuple = vec![0usize; m];
            for idx in 0..n.pow(m as u32) {
                decode_index(idx, n, &mut tuple);
                let eq = pf.eval_tuple(&ext, &tuple) == pg.eval_tuple(&ext, &tuple);
                let zero = ph.eval_tuple(&ext, &tuple) == 0;
                assert_eq!(eq, zero, "normalization unsound for {f} vs {g} at {tuple:?}");
                total += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE 8: PASS — 600 normalized pairs over 3 fixtures, {total} tuples, f = g ⇔ f/g = 0"
    );
}
