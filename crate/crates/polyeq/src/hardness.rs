//! The algebras A_p and the graph-coloring reduction.
//!
//! A_p lives on Z_{p²} with the group operations and the operation family
//! f@n(x1,…,xn) = p·x1·x2⋯xn mod p², one operation per arity. For an odd
//! prime p, a graph G reduces to the term
//!
//! t_G = f@((p−1)|E|) applied to p−1 copies of (x_u − x_v) per edge,
//!
//! which evaluates to p exactly on assignments whose cosets mod p form a
//! proper p-coloring and to 0 otherwise. Solving t_G = p over A_p is
//! therefore exactly graph p-colorability.

use std::fmt::Write as _;

use crate::algebra::{checked_power, decode_index, Element, FiniteAlgebra, OpTemplate};
use crate::error::{Error, Result};
use crate::fixtures::cyclic_group;
use crate::term::Term;

/// Simple undirected graph with canonicalized edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    pub vertices: usize,
    /// Sorted, deduplicated pairs (u, v) with u < v, 0-based.
    pub edges: Vec<(usize, usize)>,
}

impl GraphInstance {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canon = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a >= vertices || b >= vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {vertices} vertices"
                )));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(GraphInstance {
            vertices,
            edges: canon,
        })
    }

    pub fn complete(vertices: usize) -> Self {
        let edges = (0..vertices)
            .flat_map(|a| ((a + 1)..vertices).map(move |b| (a, b)));
        GraphInstance::new(vertices, edges).expect("complete graph is valid")
    }

    pub fn cycle(vertices: usize) -> Self {
        let edges = (0..vertices).map(|a| (a, (a + 1) % vertices));
        GraphInstance::new(vertices, edges).expect("cycle is valid")
    }

    /// Parses the graph file format: a `vertices N` line, then one
    /// `edge u v` line per edge (0-based). Blank lines and `#` comments are
    /// skipped.
    pub fn parse(source: &str) -> Result<Self> {
        let mut vertices: Option<usize> = None;
        let mut edges = Vec::new();
        for line in source.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("vertices") => {
                    let n = tokens
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::InvalidGraph("bad vertices line".into()))?;
                    vertices = Some(n);
                }
                Some("edge") => {
                    let a: usize = tokens
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::InvalidGraph("bad edge line".into()))?;
                    let b: usize = tokens
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::InvalidGraph("bad edge line".into()))?;
                    edges.push((a, b));
                }
                Some(other) => {
                    return Err(Error::InvalidGraph(format!("unknown directive `{other}`")));
                }
                None => unreachable!("empty lines are skipped"),
            }
        }
        let vertices =
            vertices.ok_or_else(|| Error::InvalidGraph("missing `vertices` line".into()))?;
        GraphInstance::new(vertices, edges)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices {}", self.vertices);
        for (a, b) in &self.edges {
            let _ = writeln!(out, "edge {a} {b}");
        }
        out
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }
}

fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A_p: the group Z_{p²} together with the template family f@n.
#[derive(Debug, Clone)]
pub struct ApAlgebra {
    pub p: usize,
    pub algebra: FiniteAlgebra,
}

impl ApAlgebra {
    /// f@n as a running product; no table of size (p²)^n is built.
    pub fn f(&self, args: &[Element]) -> Element {
        OpTemplate::ApFamily { p: self.p }.eval(args)
    }
}

/// Constructs A_p on Z_{p²}. Any prime is accepted here; the oddness
/// requirement belongs to the reduction only.
pub fn build_ap(p: usize) -> Result<ApAlgebra> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let algebra = cyclic_group(p * p).with_template(OpTemplate::ApFamily { p });
    Ok(ApAlgebra { p, algebra })
}

/// The reduction term t_G = f@((p−1)|E|)(…), with p−1 copies of the
/// difference x_u − x_v per edge, edges in canonical order. Variables are
/// x1..x|V| for vertices 0..|V|−1.
pub fn reduce_graph(g: &GraphInstance, p: usize) -> Result<Term> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::RequiresOddPrime(p));
    }
    if g.edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let mut args = Vec::with_capacity((p - 1) * g.edges.len());
    for &(u, v) in &g.edges {
        let diff = Term::apply(
            "plus",
            vec![
                Term::Var(u + 1),
                Term::apply("neg", vec![Term::Var(v + 1)]),
            ],
        );
        for _ in 0..(p - 1) {
            args.push(diff.clone());
        }
    }
    Ok(Term::Apply {
        op: format!("f@{}", args.len()),
        args,
    })
}

/// A vertex coloring extracted from a witness, with a properness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    /// Color of vertex v: witness value mod p.
    pub colors: Vec<usize>,
    /// True when no edge joins two vertices of the same color.
    pub proper: bool,
}

/// Colors vertex v with witness(v) mod p; a witness solving t_G = p always
/// yields a proper coloring, and an improper result is flagged.
pub fn coloring_from_witness(g: &GraphInstance, witness: &[Element], p: usize) -> Coloring {
    assert!(
        witness.len() >= g.vertices,
        "witness must cover all vertices"
    );
    let colors: Vec<usize> = (0..g.vertices).map(|v| witness[v] % p).collect();
    let proper = g.edges.iter().all(|&(u, v)| colors[u] != colors[v]);
    Coloring { colors, proper }
}

/// Maps color c to the coset representative c itself; distinct colors land
/// in distinct cosets of pZ_{p²}, so the assignment solves t_G = p iff the
/// coloring is proper.
pub fn witness_from_coloring(coloring: &[usize], p: usize) -> Result<Vec<Element>> {
    if let Some(&worst) = coloring.iter().max() {
        if worst >= p {
            return Err(Error::TooManyColors {
                used: worst + 1,
                allowed: p,
            });
        }
    }
    Ok(coloring.to_vec())
}

/// Exact p-colorability by enumeration of all p^|V| colorings, within the
/// given budget of colorings.
pub fn p_colorable(g: &GraphInstance, p: usize, budget: u64) -> Result<bool> {
    let total = checked_power(p, g.vertices as u32, budget)?;
    let mut colors = vec![0usize; g.vertices];
    for idx in 0..total {
        decode_index(idx, p, &mut colors);
        if g.edges.iter().all(|&(u, v)| colors[u] != colors[v]) {
            return Ok(true);
        }
    }
    Ok(false)
}
