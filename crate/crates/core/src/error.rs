use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("tensor is not symmetric")]
    NotSymmetric,

    #[error("tensor is not ad-invariant")]
    NotInvariant,

    #[error("cobracket image of basis vector {0} is not antisymmetric")]
    CobracketNotAntisymmetric(usize),

    #[error("invalid r-matrix: {0}")]
    InvalidRMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid ciliated graph: {0}")]
    InvalidGraph(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown half-edge `{0}`")]
    UnknownHalfEdge(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("local move pattern not matched: {0}")]
    MovePattern(String),

    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("no matrix representation available for `{0}`")]
    NoRepresentation(String),

    #[error("path word is not composable at step {0}")]
    NotComposable(usize),

    #[error("adjoint re-expansion residual {0:e} exceeds tolerance")]
    ReexpansionResidual(f64),

    #[error("matrix is singular or badly conditioned")]
    Singular,

    #[error("JSON error at `{pointer}`: {message}")]
    Json { pointer: String, message: String },

    #[error("unknown built-in `{0}`")]
    UnknownBuiltin(String),
}
