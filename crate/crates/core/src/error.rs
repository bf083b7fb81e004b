use thiserror::Error;

use crate::complex::Vertex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex `{0}` is not in the complex")]
    MissingVertex(Vertex),

    #[error("label `{0}` is already in use")]
    LabelClash(Vertex),

    #[error("the empty complex has no reduction")]
    EmptyComplex,

    #[error("cannot cone a complex that already contains triangles")]
    ConeOverTriangle,

    #[error("canonical search exceeded its budget on {0} vertices")]
    CanonicalBound(usize),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("orientation does not match the graph: {0}")]
    OrientationMismatch(String),

    #[error("orientation contains a directed cycle")]
    CyclicOrientation,

    #[error("vertex `{vertex}` has out-degree {degree}, which is not allowed")]
    OutDegree { vertex: Vertex, degree: usize },

    #[error("invalid degree set `{0}`")]
    DegreeSet(String),

    #[error("invalid family: {0}")]
    Family(String),

    #[error("family is not subtree-closed")]
    NotSubtreeClosed,

    #[error("graph is not a tree")]
    NotATree,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid X3C instance: {0}")]
    Instance(String),

    #[error("search budget of {0} trials exhausted")]
    BudgetExhausted(u64),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
