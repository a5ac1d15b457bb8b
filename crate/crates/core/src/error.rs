use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix has non-integer entries")]
    NonInteger,

    #[error("determinant {det} is not invertible modulo {modulus}")]
    NotInvertibleMod { det: String, modulus: String },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("map is not semisimple (minimal polynomial is not squarefree)")]
    NotSemisimple,

    #[error("grading is not valid: {0}")]
    InvalidGrading(String),

    #[error("weight system violates the structure constants: {0}")]
    WeightConstraint(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("obstruction prime {0}")]
    ObstructionPrime(String),

    #[error("maps do not commute")]
    NotCommuting,

    #[error("group is not finite within bound {0}")]
    CapExceeded(usize),

    #[error("search unsupported, use certificate mode: {0}")]
    UnsupportedSearch(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}
