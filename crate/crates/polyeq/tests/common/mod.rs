//! Shared helpers for the integration suites: a seeded random term
//! generator over an algebra's signature and the fixture loops.

use polyeq::algebra::FiniteAlgebra;
use polyeq::malcev::{derive_loop, LoopStructure};
use polyeq::term::{parse_term, Term};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random term over the algebra's tabulated operations with variables
/// among x1..x`max_vars` and symbol length at most `max_len`.
pub fn random_term(
    algebra: &FiniteAlgebra,
    rng: &mut ChaCha8Rng,
    max_vars: usize,
    max_len: usize,
) -> Term {
    let ops: Vec<(String, usize)> = algebra
        .operations
        .iter()
        .filter(|op| op.arity >= 1)
        .map(|op| (op.name.clone(), op.arity))
        .collect();
    gen(&ops, algebra.domain_size, rng, max_vars, max_len)
}

fn leaf(n: usize, rng: &mut ChaCha8Rng, max_vars: usize) -> Term {
    if max_vars > 0 && rng.gen_bool(0.7) {
        Term::Var(rng.gen_range(1..=max_vars))
    } else {
        Term::Const(rng.gen_range(0..n))
    }
}

fn gen(
    ops: &[(String, usize)],
    n: usize,
    rng: &mut ChaCha8Rng,
    max_vars: usize,
    budget: usize,
) -> Term {
    if budget <= 1 || rng.gen_bool(0.25) {
        return leaf(n, rng, max_vars);
    }
    let viable: Vec<&(String, usize)> = ops.iter().filter(|(_, a)| a + 1 <= budget).collect();
    if viable.is_empty() {
        return leaf(n, rng, max_vars);
    }
    let (name, arity) = viable[rng.gen_range(0..viable.len())];
    // one symbol for the operation, at least one per argument; spread the
    // slack randomly so shapes vary
    let mut slack = budget - 1 - arity;
    let mut args = Vec::with_capacity(*arity);
    for i in 0..*arity {
        let extra = if i + 1 == *arity {
            slack
        } else {
            rng.gen_range(0..=slack)
        };
        slack -= extra;
        args.push(gen(ops, n, rng, max_vars, 1 + extra));
    }
    Term::Apply {
        op: name.clone(),
        args,
    }
}

/// The additive loop of a fixture built on a cyclic group (ops `plus`,
/// `neg`), via the Mal'cev term x1 − x2 + x3.
pub fn additive_loop(algebra: &FiniteAlgebra) -> LoopStructure {
    let m = parse_term("plus(x1,plus(neg(x2),x3))", algebra).expect("fixture has plus/neg");
    derive_loop(algebra, &m, 0).expect("cyclic fixture yields a loop")
}
