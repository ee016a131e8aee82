//! Deciding polynomial equation solvability and identity checking over
//! finite algebras with a Mal'cev term.
//!
//! The pipeline: detect a Mal'cev operation, derive the associated loop
//! structure on the domain, compute commutator-theoretic invariants
//! (nilpotency, supernilpotency), decompose polynomials into absorbing
//! components, and bound the search space for solutions so that equation
//! solvability and identity checking become finite searches.

pub mod algebra;
pub mod clone_closure;
pub mod commutator;
pub mod decomposition;
pub mod error;
pub mod fixtures;
pub mod hardness;
pub mod linear;
pub mod malcev;
pub mod partition;
pub mod ramsey;
pub mod solver;
pub mod structure;
pub mod term;
