//! Named numerical thresholds used across the crate.
//!
//! Everything here is a *detection* threshold baked into the semantics of an
//! operation (e.g. "is this quaternion real?"), not a test tolerance; test
//! tolerances live next to the tests that use them.

/// Relative threshold for treating a quaternion as real:
/// `|imag(q)| <= REAL_AXIS_REL * (1 + |q|)`.
pub const REAL_AXIS_REL: f64 = 1e-13;

/// Threshold on `|I_q - I_p|` (or `|I_q + I_p|`) for two non-real quaternions
/// to count as lying in the same slice plane.
pub const SAME_PLANE: f64 = 1e-10;

/// Relative threshold below which the companion divisor of a negative star
/// power counts as singular: `|Q_{c,p}(q)| <= SPHERE_DIVISOR_REL * scale`.
pub const SPHERE_DIVISOR_REL: f64 = 1e-12;

/// Absolute threshold below which a symmetrization counts as singular when
/// forming a star inverse.
pub const STAR_SYMM_MIN: f64 = 1e-12;
