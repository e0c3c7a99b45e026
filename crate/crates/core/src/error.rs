use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not negative definite")]
    NotNegativeDefinite,

    #[error("singular linear system")]
    Singular,

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("invalid dual graph: {0}")]
    InvalidGraph(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not decomposable over candidate set: {0}")]
    NotDecomposable(String),

    #[error("inconsistent arithmetic genus: class gives {from_class}, dual graph gives {from_graph}")]
    InconsistentGenus { from_class: String, from_graph: String },

    #[error("no pencil detected: {0}")]
    NoPencil(String),

    #[error("requires cohomology, unsupported: {0}")]
    Unsupported(String),

    #[error("iteration cap of {0} reached")]
    IterationCap(usize),
}

impl Error {
    /// Internal invariant violations map to CLI exit code 2; everything else is
    /// an input problem.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::IterationCap(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
