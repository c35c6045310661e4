//! Numerical toolkit for quaternionic function theory built around the
//! factorizations of the 4-D Laplacian through the Cauchy–Fueter operator.
//!
//! The crate provides:
//!
//! * quaternion arithmetic and slice coordinates ([`quat`]),
//! * the star calculus of slice functions: star products, star powers around a
//!   center, spherical blocks and the representation formula ([`star`],
//!   [`slicefn`]),
//! * the polynomial families spanning axially harmonic, axially polyanalytic
//!   (order 2) and axially Fueter-regular functions ([`families`]),
//! * the first and second order operators `D`, `D̄`, `Δ`, the Euler/Gamma
//!   pair and the global operators, with finite-difference and closed-form
//!   evaluation paths ([`operators`]),
//! * the Cauchy-type kernels of the associated integral calculi and their
//!   splittings and expansions ([`kernels`]),
//! * convergence-region geometry for star and spherical expansions
//!   ([`regions`]),
//! * series evaluation and the coefficient transforms that map a slice-regular
//!   expansion onto the expansion of `Df`, `D̄f` or `Δf` ([`series`]),
//! * contour quadrature realizing the Cauchy formula and the integral
//!   representations of the three derived function classes ([`contour`]).

pub mod contour;
pub mod descriptor;
pub mod error;
pub mod families;
pub mod kernels;
pub mod operators;
pub mod quat;
pub mod regions;
pub mod series;
pub mod slicefn;
pub mod star;
pub mod tol;
pub mod verify;

pub use error::Error;
pub use quat::{ImaginaryUnit, Quaternion};
pub use slicefn::SliceFunction;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Exact binomial coefficient as `f64` (exact for every case used here).
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
