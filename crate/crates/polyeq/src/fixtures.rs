//! Builders for the algebras used throughout the tests and docs.

use crate::algebra::{FiniteAlgebra, Operation};

/// (Z_n, plus, neg, 0) with the usual tables and designated zero 0.
pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    let mut plus = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            plus.push((a + b) % n);
        }
    }
    let neg = (0..n).map(|a| (n - a) % n).collect();
    FiniteAlgebra::new(
        n,
        vec![
            Operation {
                name: "plus".into(),
                arity: 2,
                table: plus,
            },
            Operation {
                name: "neg".into(),
                arity: 1,
                table: neg,
            },
        ],
    )
    .unwrap()
    .with_zero(0)
    .unwrap()
}

/// The A_3 reduct (Z_9, plus, neg, 0, f@2) with f@2(x,y) = 3xy mod 9.
pub fn z9_f2() -> FiniteAlgebra {
    let mut alg = cyclic_group(9);
    let mut f2 = Vec::with_capacity(81);
    for a in 0..9 {
        for b in 0..9 {
            f2.push(3 * a * b % 9);
        }
    }
    alg.add_op("f@2", 2, f2).unwrap();
    alg
}

/// Dihedral group of order 8 as (mul, inv) with identity 0.
///
/// Element `i + 4j` stands for r^i s^j with r the rotation and s a
/// reflection; (i1,j1)(i2,j2) = (i1 + (-1)^{j1} i2, j1 + j2).
pub fn dihedral_8() -> FiniteAlgebra {
    let idx = |i: usize, j: usize| i % 4 + 4 * (j % 2);
    let mut mul = Vec::with_capacity(64);
    for a in 0..8 {
        let (i1, j1) = (a % 4, a / 4);
        for b in 0..8 {
            let (i2, j2) = (b % 4, b / 4);
            let i = if j1 == 0 { i1 + i2 } else { i1 + 4 - i2 };
            mul.push(idx(i, j1 + j2));
        }
    }
    let mut inv = Vec::with_capacity(8);
    for a in 0..8 {
        let (i, j) = (a % 4, a / 4);
        if j == 0 {
            inv.push(idx(4 - i, 0));
        } else {
            // Reflections are involutions.
            inv.push(a);
        }
    }
    FiniteAlgebra::new(
        8,
        vec![
            Operation {
                name: "mul".into(),
                arity: 2,
                table: mul,
            },
            Operation {
                name: "inv".into(),
                arity: 1,
                table: inv,
            },
        ],
    )
    .unwrap()
    .with_zero(0)
    .unwrap()
}

/// Two-element meet-semilattice ({0,1}, min).
pub fn meet_semilattice_2() -> FiniteAlgebra {
    FiniteAlgebra::new(
        2,
        vec![Operation {
            name: "meet".into(),
            arity: 2,
            table: vec![0, 0, 0, 1],
        }],
    )
    .unwrap()
    .with_zero(0)
    .unwrap()
}

/// One-element algebra with a single binary operation.
pub fn trivial() -> FiniteAlgebra {
    FiniteAlgebra::new(
        1,
        vec![Operation {
            name: "plus".into(),
            arity: 2,
            table: vec![0],
        }],
    )
    .unwrap()
    .with_zero(0)
    .unwrap()
}
