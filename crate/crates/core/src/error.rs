use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("invalid block data: {0}")]
    Blocks(String),

    #[error("invalid link pattern: {0}")]
    Pattern(String),

    #[error("matrix is not {0}-nilpotent")]
    NotNilpotent(usize),

    #[error("matrix is not in the generic locus: {0}")]
    NotGeneric(String),

    #[error("dimension vector mismatch: {0}")]
    DimensionVector(String),

    #[error("invalid invariant datum: {0}")]
    Datum(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction defect: {0}")]
    Construction(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::Index(_) => "index",
            Error::Blocks(_) => "blocks",
            Error::Pattern(_) => "pattern",
            Error::NotNilpotent(_) => "not_nilpotent",
            Error::NotGeneric(_) => "not_generic",
            Error::DimensionVector(_) => "dimension_vector",
            Error::Datum(_) => "datum",
            Error::Precondition(_) => "precondition",
            Error::Construction(_) => "construction",
            Error::Parse(_) => "parse",
        }
    }
}
