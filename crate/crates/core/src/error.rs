use thiserror::Error;

/// Errors raised by the analytics, the simulator and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The DRV would out-power the BS umbrella layer, so the closed forms
    /// (which divide by 1 - W) no longer describe a bounded sensing region.
    #[error("model validity: {0}")]
    ModelValidity(String),

    #[error("distance singularity: received power is undefined at d = 0")]
    Singularity,

    #[error("coincident points: {0}")]
    CoincidentPoints(String),

    #[error("degenerate polyline: {0}")]
    DegeneratePolyline(String),

    #[error("equal-power contour not found at angle {theta} rad within r <= {limit} m")]
    ContourNotFound { theta: f64, limit: f64 },

    #[error("circle approximation degenerates: beta * W = {0} >= 1")]
    DegenerateCircle(f64),

    #[error("conic is not an ellipse (b^2 - ac = {0})")]
    NotAnEllipse(f64),

    #[error("degenerate conic: {0}")]
    DegenerateConic(String),

    #[error("empty point pattern")]
    EmptyPattern,

    #[error("empty shape: {0}")]
    EmptyShape(String),

    #[error("ranging event probability {0} exceeds 1; the area of interest is too small")]
    ProbabilityOutOfRange(f64),

    #[error("simulation accumulated zero time")]
    ZeroSimTime,

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures caused by numerically degenerate geometry rather than
    /// by the caller's input.
    pub fn is_numeric_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::ContourNotFound { .. }
                | Error::DegenerateCircle(_)
                | Error::NotAnEllipse(_)
                | Error::DegenerateConic(_)
                | Error::DegeneratePolyline(_)
                | Error::EmptyShape(_)
                | Error::ZeroSimTime
        )
    }
}
