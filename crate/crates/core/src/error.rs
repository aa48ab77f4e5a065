use thiserror::Error;

use crate::geometry::expr::{EvalError, ParseError};
use crate::index::MultiIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid theta {0:?}: expected \"p/q\" or an exact decimal in [0, 1] with denominator <= 10^6")]
    InvalidTheta(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty mesh")]
    EmptyMesh,

    #[error("resolution {got} too small (need at least {min})")]
    ResolutionTooSmall { got: usize, min: usize },

    #[error("quadrature resolution too low: {0}")]
    ResolutionTooLow(String),

    #[error("unbounded domain {0} needs a weight-dependent rule")]
    UnboundedDomain(String),

    #[error("weight is not admissible: {0}")]
    NotAdmissible(String),

    #[error("truncation scan exhausted the radius ladder: {0}")]
    TruncationFailed(String),

    #[error("unsupported weight: {0}")]
    UnsupportedWeight(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("numerical rank deficiency at basis column {position} (multi-index {index})")]
    RankDeficient { position: usize, index: MultiIndex },

    #[error("linear program is unbounded: {0}")]
    UnboundedLp(String),

    #[error("simplex did not converge within {0} pivots")]
    SimplexStalled(usize),

    #[error("mesh refinement moved the result by {rel_change:.3e} (limit {limit:.1e})")]
    MeshNotConverged { rel_change: f64, limit: f64 },

    #[error("radial grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("evaluation set intersects the hull: {0}")]
    HullIntersection(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed text: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures map to exit status 2; everything else is a
    /// validation failure (exit status 1).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::UnboundedLp(_)
                | Error::SimplexStalled(_)
                | Error::MeshNotConverged { .. }
                | Error::ResolutionTooLow(_)
                | Error::TruncationFailed(_)
        )
    }
}
