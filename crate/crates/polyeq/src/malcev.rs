//! Mal'cev terms and the loop structure they induce.
//!
//! A ternary term m is Mal'cev when m(y,x,x) = m(x,x,y) = y. Over a
//! nilpotent algebra, x·y = m(x,0,y) is a loop multiplication with neutral
//! element 0; the divisions are solved from the Latin square and the exponent
//! e is the least positive integer with x^e = 0 (left-associated powers) for
//! every x simultaneously.

use crate::algebra::{table_index, Element, FiniteAlgebra, Operation};
use crate::clone_closure::{CloneBfs, CloneConfig};
use crate::error::{Error, Result};
use crate::term::{Program, Term};

/// Outcome of checking the Mal'cev identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MalcevCheck {
    Holds,
    /// m(y,x,x) ≠ y or m(x,x,y) ≠ y at the recorded pair.
    Fails {
        x: Element,
        y: Element,
        got: Element,
    },
}

impl MalcevCheck {
    pub fn holds(&self) -> bool {
        matches!(self, MalcevCheck::Holds)
    }
}

/// Checks m(y,x,x) = m(x,x,y) = y for all pairs.
pub fn verify_malcev(algebra: &FiniteAlgebra, candidate: &Term) -> Result<MalcevCheck> {
    if candidate.max_var() > 3 {
        return Err(Error::BadMalcevVariables);
    }
    let prog = Program::compile(candidate, algebra)?;
    let n = algebra.domain_size;
    for x in 0..n {
        for y in 0..n {
            let left = prog.eval_tuple(algebra, &[y, x, x]);
            if left != y {
                return Ok(MalcevCheck::Fails { x, y, got: left });
            }
            let right = prog.eval_tuple(algebra, &[x, x, y]);
            if right != y {
                return Ok(MalcevCheck::Fails { x, y, got: right });
            }
        }
    }
    Ok(MalcevCheck::Holds)
}

fn table_is_malcev(table: &[Element], n: usize) -> bool {
    for x in 0..n {
        for y in 0..n {
            if table[table_index(&[y, x, x], n)] != y || table[table_index(&[x, x, y], n)] != y {
                return false;
            }
        }
    }
    true
}

/// Searches for a Mal'cev term by breadth-first generation of ternary term
/// functions (projections closed under the basic operations; no constants).
///
/// Returns the first Mal'cev function discovered, which has minimal
/// composition depth; the generation order is canonical, so the result is
/// deterministic. `Ok(None)` means the term clone saturated without one;
/// hitting the cap instead is reported as indeterminate.
pub fn find_malcev(algebra: &FiniteAlgebra, config: &CloneConfig) -> Result<Option<Term>> {
    let n = algebra.domain_size;
    let width = n.pow(3);
    // keep the table store well under the entry budget
    let mut cfg = config.clone();
    cfg.cap = cfg.cap.min((cfg.table_budget as usize / width).max(1));
    let mut bfs = CloneBfs::new_without_constants(algebra, 3, &cfg)?;
    let mut scanned = 0usize;
    loop {
        for i in scanned..bfs.tables.len() {
            if table_is_malcev(&bfs.tables[i], n) {
                return Ok(Some(bfs.terms[i].clone()));
            }
        }
        scanned = bfs.tables.len();
        if !bfs.step() {
            break;
        }
    }
    // scan the final round
    for i in scanned..bfs.tables.len() {
        if table_is_malcev(&bfs.tables[i], n) {
            return Ok(Some(bfs.terms[i].clone()));
        }
    }
    if bfs.saturated {
        Ok(None)
    } else {
        Err(Error::MalcevIndeterminate)
    }
}

/// The loop (A, ·, \, /, 0) derived from a Mal'cev operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopStructure {
    pub n: usize,
    pub zero: Element,
    /// x·y at index x*n + y.
    pub mul: Vec<Element>,
    /// x\y (the z with x·z = y) at index x*n + y.
    pub ldiv: Vec<Element>,
    /// y/x (the z with z·x = y) at index y*n + x.
    pub rdiv: Vec<Element>,
    /// Least e ≥ 1 with x^e = 0 for all x.
    pub exponent: usize,
}

impl LoopStructure {
    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.mul[x * self.n + y]
    }

    pub fn ldiv(&self, x: Element, y: Element) -> Element {
        self.ldiv[x * self.n + y]
    }

    pub fn rdiv(&self, y: Element, x: Element) -> Element {
        self.rdiv[y * self.n + x]
    }

    /// Left-associated power ((…(x·x)·x)…)·x with `k` factors, k ≥ 1.
    pub fn left_power(&self, x: Element, k: usize) -> Element {
        assert!(k >= 1);
        let mut acc = x;
        for _ in 1..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Adds ·, \ and / as named operations; used to express division in terms.
    pub fn extend_algebra(
        &self,
        algebra: &FiniteAlgebra,
        mul_name: &str,
        ldiv_name: &str,
        rdiv_name: &str,
    ) -> Result<FiniteAlgebra> {
        let mut out = algebra.clone();
        for (name, table) in [
            (mul_name, &self.mul),
            (ldiv_name, &self.ldiv),
            (rdiv_name, &self.rdiv),
        ] {
            out.operations.push(Operation {
                name: name.to_string(),
                arity: 2,
                table: table.clone(),
            });
        }
        out.validate()?;
        Ok(out)
    }
}

/// Cap on the exponent search in [`derive_loop`].
pub const EXPONENT_CAP: usize = 1 << 20;

/// Builds the loop structure from x·y = m(x,0,y).
///
/// Fails when the multiplication is not a Latin square (with a witness) or no
/// common exponent exists within [`EXPONENT_CAP`].
pub fn derive_loop(
    algebra: &FiniteAlgebra,
    malcev: &Term,
    zero: Element,
) -> Result<LoopStructure> {
    let n = algebra.domain_size;
    if zero >= n {
        return Err(Error::ElementOutOfRange {
            value: zero,
            domain: n,
        });
    }
    let prog = Program::compile(malcev, algebra)?;
    let mut mul = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            mul[x * n + y] = prog.eval_tuple(algebra, &[x, zero, y]);
        }
    }
    // neutral element
    for x in 0..n {
        if mul[zero * n + x] != x {
            return Err(Error::NotLatinSquare(format!(
                "0·{x} = {} ≠ {x}",
                mul[zero * n + x]
            )));
        }
        if mul[x * n + zero] != x {
            return Err(Error::NotLatinSquare(format!(
                "{x}·0 = {} ≠ {x}",
                mul[x * n + zero]
            )));
        }
    }
    // Latin square and division tables
    let mut ldiv = vec![usize::MAX; n * n];
    let mut rdiv = vec![usize::MAX; n * n];
    for x in 0..n {
        for z in 0..n {
            let y = mul[x * n + z];
            if ldiv[x * n + y] != usize::MAX {
                return Err(Error::NotLatinSquare(format!(
                    "row {x} repeats value {y}"
                )));
            }
            ldiv[x * n + y] = z;
            let y = mul[z * n + x];
            if rdiv[y * n + x] != usize::MAX {
                return Err(Error::NotLatinSquare(format!(
                    "column {x} repeats value {y}"
                )));
            }
            rdiv[y * n + x] = z;
        }
    }
    // least e with x^e = 0 for all x, iterated incrementally
    let mut cur: Vec<Element> = (0..n).collect(); // x^1
    let mut exponent = None;
    for e in 1..=EXPONENT_CAP {
        if cur.iter().all(|&v| v == zero) {
            exponent = Some(e);
            break;
        }
        for x in 0..n {
            cur[x] = mul[cur[x] * n + x];
        }
    }
    let Some(exponent) = exponent else {
        return Err(Error::NoExponent(EXPONENT_CAP));
    };
    Ok(LoopStructure {
        n,
        zero,
        mul,
        ldiv,
        rdiv,
        exponent,
    })
}
