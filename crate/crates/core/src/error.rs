use thiserror::Error;

/// Errors raised by the symbolic layer and the structures built on it.
///
/// Failed mathematical checks are not errors; they come back as
/// [`crate::report::Check`] values with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chart mismatch: [{left}] vs [{right}]")]
    ChartMismatch { left: String, right: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{line}:{column}: unknown identifier `{name}`")]
    UnknownIdentifier { line: usize, column: usize, name: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("cochain belongs to a different algebroid")]
    ParentMismatch,

    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("polynomial of total degree {degree} exceeds the cap of {cap}")]
    PolyDegreeCap { degree: u32, cap: u32 },

    #[error("connection is not flat: {0}")]
    NotFlat(String),

    #[error("invalid algebroid: {0}")]
    InvalidAlgebroid(String),

    #[error("VB-algebroid axioms violated: {0}")]
    VbAxioms(String),

    #[error("not linear: {0}")]
    NotLinear(String),

    #[error("not an algebroid derivation: {0}")]
    NotDerivation(String),

    #[error("IM triple conditions fail: {0}")]
    TripleCheck(String),

    #[error("decomposition invariant violated: {0}")]
    Decomposition(String),

    #[error("the VB-algebroid has no side bundle (side rank 0)")]
    NoSideBundle,

    #[error("the VB-algebroid has no core (core rank 0)")]
    NoCore,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
