use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema errors: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Schema(Vec<SchemaIssue>),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("degenerate grading: {0}")]
    DegenerateGrading(String),
    #[error("module is not semisimple")]
    NotSemisimple,
    #[error("point is not polystable")]
    NotPolystable,
    #[error("twisted input is not supported by this operation")]
    TwistedInput,
    #[error("loop {0} is not normalized (inner part must be the identity)")]
    Unnormalized(usize),
    #[error("group element {0} does not preserve its grading")]
    NotInCentralizer(usize),
    #[error("direction is not singular: {0}")]
    NotSingular(String),
    #[error("incomplete assignment: missing {0}")]
    IncompleteAssignment(String),
    #[error("candidate does not satisfy the Stokes conditions: {0}")]
    UnverifiedCandidate(String),
    #[error("surface relation cannot be solved for this seed")]
    UnsolvableRelation,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("splitting field required: {0}")]
    SplittingFieldRequired(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// One problem found while validating an instance document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path} (line {line}): {message}")]
pub struct SchemaIssue {
    pub path: String,
    pub line: usize,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, Error>;
