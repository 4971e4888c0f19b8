use thiserror::Error;

/// Errors raised by complex construction, operator algebra and the file layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HdxError {
    #[error("complex must contain at least one face")]
    EmptyComplex,
    #[error("duplicate face {face:?}")]
    DuplicateFace { face: Vec<u32> },
    #[error("face {index} has nonpositive weight {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("face {index} has arity {found}, expected {expected}")]
    InconsistentArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {vertex} of color {color} exceeds ground set size {size}")]
    VertexOutOfRange { color: usize, vertex: u32, size: usize },
    #[error("marginal for color {color} is empty")]
    EmptyMarginal { color: usize },
    #[error("color {color} out of range for a complex with {d} colors")]
    ColorOutOfRange { color: usize, d: usize },
    #[error("too many colors: {d} (limit {limit})")]
    TooManyColors { d: usize, limit: usize },
    #[error("infeasible conditioning: {values:?} on colors {colors:?} is outside the support")]
    InfeasibleConditioning { colors: Vec<usize>, values: Vec<u32> },
    #[error("face {face:?} is outside the support of the domain")]
    NotInSupport { face: Vec<u32> },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("color sets overlap: {0:?} and {1:?}")]
    OverlappingColorSets(Vec<usize>, Vec<usize>),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} exceeds cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("faces have unequal sizes ({0} vs {1})")]
    UnequalFaceSize(usize, usize),
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("function is not {0}-valued")]
    NonBoolean(&'static str),
    #[error("distribution has nonzero mean {0}")]
    NonZeroMean(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("function file is missing support face {face:?}")]
    MissingFace { face: Vec<u32> },
    #[error("unknown builtin function `{0}`")]
    UnknownBuiltin(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for HdxError {
    fn from(e: std::io::Error) -> Self {
        HdxError::Io(e.to_string())
    }
}

pub type Result<T, E = HdxError> = std::result::Result<T, E>;
