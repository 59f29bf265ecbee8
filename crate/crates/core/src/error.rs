use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single failed law, with a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagnostic {
    pub law: String,
    pub witness: String,
}

impl Diagnostic {
    pub fn new(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Diagnostic { law: law.into(), witness: witness.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.witness)
    }
}

pub(crate) fn join_diagnostics(ds: &[Diagnostic]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown operation `{0}`")]
    UnknownOperation(String),
    #[error("operation `{op}` has arity {expected}, applied to {found} arguments")]
    ArityMismatch { op: String, expected: usize, found: usize },
    #[error("variable `{0}` is not bound by the assignment")]
    UnboundVariable(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("{what} has size {size}, above the cap {cap}")]
    SizeCap { what: String, size: usize, cap: usize },
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("indices {from} and {to} are not comparable (from ≤ to required)")]
    Incomparable { from: usize, to: usize },
    #[error("invalid direct system: {}", join_diagnostics(.0))]
    InvalidSystem(Vec<Diagnostic>),
    #[error("invalid morphism: {}", join_diagnostics(.0))]
    InvalidMorphism(Vec<Diagnostic>),
    #[error("not a partition function: {}", join_diagnostics(.0))]
    NotAPartitionFunction(Vec<Diagnostic>),
    #[error("inconsistent transitions: {0}")]
    InconsistentTransitions(String),
    #[error("invalid system congruence: {0}")]
    InvalidSystemCongruence(String),
    #[error("relation links indices outside the chosen index congruence: {0}")]
    PrematureRelation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the algebra is trivial")]
    TrivialAlgebra,
    #[error("free fiber provider failed: {0}")]
    ProviderFailure(String),
    #[error("transition is not injective: {0}")]
    InjectivityViolation(String),
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("validation failed: {0}")]
    Validation(String),
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 3,
            Error::SizeCap { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
