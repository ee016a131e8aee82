use thiserror::Error;

/// Errors produced by the algebra model, parsers and decision procedures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown operation `{0}`")]
    UnknownOperation(String),

    #[error("operation `{op}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        op: String,
        expected: usize,
        got: usize,
    },

    #[error("constant {value} is out of range for domain size {domain}")]
    ConstantOutOfRange { value: usize, domain: usize },

    #[error("element {value} is out of range for domain size {domain}")]
    ElementOutOfRange { value: usize, domain: usize },

    #[error("variable x{0} is unassigned")]
    UnassignedVariable(usize),

    #[error("no designated zero element in the algebra")]
    NoDesignatedZero,

    #[error("invalid algebra description: {0}")]
    InvalidAlgebra(String),

    #[error("table for `{op}` would need {entries} entries, over the budget of {budget}")]
    TableOverBudget {
        op: String,
        entries: u128,
        budget: u64,
    },

    #[error("power {base}^{exp} needs {entries} entries, over the budget of {budget}")]
    PowerOverBudget {
        base: usize,
        exp: u32,
        entries: u128,
        budget: u64,
    },

    #[error("closure cap of {cap} distinct tables reached before saturation")]
    ClosureCapReached { cap: usize },

    #[error("no Mal'cev term found within the cap (search not saturated)")]
    MalcevIndeterminate,

    #[error("candidate Mal'cev term must use only x1, x2, x3")]
    BadMalcevVariables,

    #[error("m(x,0,y) is not a Latin square: {0}")]
    NotLatinSquare(String),

    #[error("no loop exponent found within the iteration cap {0}")]
    NoExponent(usize),

    #[error("supernilpotency degree is indeterminate: {0}")]
    IndeterminateDegree(String),

    #[error("nilpotency degree exceeds the cap {0}")]
    NilpotencyCapExceeded(usize),

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("theorem requires an odd prime, got {0}")]
    RequiresOddPrime(usize),

    #[error("graph has no edges")]
    EmptyEdgeSet,

    #[error("invalid graph description: {0}")]
    InvalidGraph(String),

    #[error("coloring uses {used} colors but only {allowed} are allowed")]
    TooManyColors { used: usize, allowed: usize },

    #[error("invalid input: {0}")]
    BadInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
