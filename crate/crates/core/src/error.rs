use thiserror::Error;

use crate::angle::ForbiddenTriple;
use crate::grid::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point {point} lies outside G_{n}")]
    OutOfGrid { point: Point, n: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("angle {0} has no exact rational tangent")]
    NotRepresentable(String),
    #[error("degenerate angle: {0}")]
    DegenerateAngle(String),
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("construction is not peaceful: {0}")]
    NotPeaceful(ForbiddenTriple),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("n = {n} exceeds the configured cap of {cap}; {hint}")]
    TooLarge { n: u32, cap: u32, hint: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
