//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The conjugate-over-modulus inverse of `0` is undefined.
    #[error("inverse of the zero quaternion is undefined")]
    ZeroInverse,

    /// An imaginary unit was requested from a (near-)real quaternion or a
    /// (near-)zero vector, where the axis is undefined.
    #[error("imaginary unit undefined: {0}")]
    UndefinedAxis(String),

    /// A star inverse was requested at a point where the symmetrization is
    /// numerically zero. Carries `|f^s(q)|`.
    #[error("star inverse singular: |f^s(q)| = {magnitude:.3e}")]
    StarSingularity { magnitude: f64 },

    /// A negative star power / spherical block was requested too close to the
    /// singular sphere of the center. Carries the divisor magnitude.
    #[error("singular at the sphere of the center: divisor magnitude {magnitude:.3e}")]
    SphericalSingularity { magnitude: f64 },

    /// No closed-form action is implemented for this operator/target pair.
    #[error("no closed-form action for {0}")]
    UnsupportedExact(String),

    /// A precondition on the arguments failed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The evaluation point lies outside the convergence region of a series.
    #[error("point outside the convergence region of the expansion")]
    OutsideRegion,

    /// The evaluation point is too close to the integration contour.
    #[error(
        "ill-conditioned contour integral: distance to contour {distance:.3e} < 2 x node spacing {spacing:.3e}"
    )]
    IllConditionedContour { distance: f64, spacing: f64 },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}
