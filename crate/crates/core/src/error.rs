use crate::numerics::ComplexPoint;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("enclosure meets a pole (denominator box contains 0)")]
    PoleIntersect,
    #[error("pole hit at {0}")]
    PoleHit(ComplexPoint),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter constraint violated: {0}")]
    ParamConstraint(String),
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("no fixed point found in the seed region")]
    NotFound,
    #[error("found {found} roots, expected {expected}")]
    CountMismatch { found: usize, expected: usize },
    #[error("point {0} lies outside the raster window")]
    OutOfWindow(ComplexPoint),
    #[error("curve sample hit a pole at {0}")]
    Degenerate(ComplexPoint),
    #[error("argument step stayed above pi/2 at the sample cap")]
    Invalid,
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
