use thiserror::Error;

use crate::exprparse::ParseError;
use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("schema error at `{path}`: {reason}")]
    Schema { path: String, reason: String },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("missing structure: {0}")]
    MissingStructure(&'static str),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("anchor is not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("algebra fails its structure check")]
    NotFManifoldAlgebra(Box<Report>),
    #[error("factor fails the F-algebroid check")]
    NotFAlgebroid(Box<Report>),
    #[error("seed is not closed: {0}")]
    NotClosed(String),
    #[error("section is not an eventual identity")]
    NotEventual(Box<Report>),
    #[error("section is not invertible")]
    NotInvertible,
    #[error("bundle map is not a Nijenhuis operator")]
    NotNijenhuis(Box<Report>),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("not a deformation")]
    NotADeformation(Box<Report>),
    #[error("obstruction does not match the coboundary: {0}")]
    ObstructionNonzero(String),
    #[error("base is not a point")]
    BaseNotPoint,
    #[error("deformations are not equivalent: {0}")]
    NotEquivalent(String),
    #[error("not a tangent presentation: {0}")]
    NotTangent(String),
    #[error("total derivative leaves the second-order jet range")]
    JetOrderOverflow,
    #[error("flat basis element {0} is not flat")]
    NotFlat(usize),
    #[error("recursion incompatible at level {alpha}: {witness}")]
    NotCompatible { alpha: usize, witness: String },
    #[error("antiderivative is not polynomial: {0}")]
    NonPolynomialAntiderivative(String),
    #[error("connection must vanish in the working coordinates")]
    NonZeroConnection,
}
