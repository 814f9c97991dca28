use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("density vectors have different reference measures")]
    ReferenceMismatch,

    #[error("absolute continuity violated at atom {atom:?} (index {atom_index})")]
    AbsoluteContinuityViolated {
        atom_index: usize,
        atom: Vec<String>,
    },

    #[error("map not measurable: preimage of codomain atom {atom_index} splits a domain atom")]
    NonMeasurableMap { atom_index: usize },

    #[error("σ-algebra is not defined on the expected space")]
    NotACoarsening,

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("event is not measurable (not a union of σ-atoms)")]
    NonMeasurableEvent,

    #[error("malformed distance matrix: {0}")]
    MalformedMatrix(String),

    #[error("homeomorphism search bound exceeded: {classes} classes, bound {bound}")]
    SearchBoundExceeded { classes: usize, bound: usize },

    #[error("unsupported category {0:?}")]
    UnsupportedCategory(String),

    #[error("image σ-algebra does not match the one generated by the map: {0}")]
    ImageSigmaMismatch(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
