//! Quaternions and slice coordinates.
//!
//! A quaternion is written `q = q0 + q1 e1 + q2 e2 + q3 e3` with
//! `e1 e2 = e3`, `e2 e3 = e1`, `e3 e1 = e2` and `ei^2 = -1`. Every non-real
//! quaternion decomposes uniquely as `q = u + I v` with `u` real, `v > 0` and
//! `I` a unit purely imaginary quaternion (the *slice coordinates* of `q`).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tol;
use crate::Result;

/// A quaternion with `f64` components, serialized as `[q0, q1, q2, q3]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.q0, q.q1, q.q2, q.q3]
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const E3: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Self { q0, q1, q2, q3 }
    }

    pub const fn real(x: f64) -> Self {
        Self::new(x, 0.0, 0.0, 0.0)
    }

    /// Component by index, `0..=3`.
    pub fn component(self, k: usize) -> f64 {
        match k {
            0 => self.q0,
            1 => self.q1,
            2 => self.q2,
            3 => self.q3,
            _ => panic!("quaternion component index out of range: {k}"),
        }
    }

    pub fn with_component(mut self, k: usize, x: f64) -> Self {
        match k {
            0 => self.q0 = x,
            1 => self.q1 = x,
            2 => self.q2 = x,
            3 => self.q3 = x,
            _ => panic!("quaternion component index out of range: {k}"),
        }
        self
    }

    /// Conjugate `q0 - q1 e1 - q2 e2 - q3 e3`.
    pub fn conj(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    /// Imaginary (vector) part as a quaternion with zero real part.
    pub fn imag(self) -> Self {
        Self::new(0.0, self.q1, self.q2, self.q3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn imag_norm(self) -> f64 {
        (self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3).sqrt()
    }

    /// `true` when the imaginary part is negligible relative to the size of
    /// the quaternion: `|imag(q)| <= 1e-13 (1 + |q|)`.
    pub fn is_real(self) -> bool {
        self.imag_norm() <= tol::REAL_AXIS_REL * (1.0 + self.norm())
    }

    /// The inverse `conj(q) / |q|^2`. The inverse of zero is undefined and
    /// reported as an error rather than a NaN.
    pub fn conj_mod_inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.conj() / n2)
    }

    /// Alias for [`Quaternion::conj_mod_inv`].
    pub fn inverse(self) -> Result<Self> {
        self.conj_mod_inv()
    }

    /// Integer power, negative exponents via the inverse.
    pub fn powi(self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.conj_mod_inv()? } else { self };
        let mut acc = Self::ONE;
        for _ in 0..n.unsigned_abs() {
            acc = acc * base;
        }
        Ok(acc)
    }

    /// Euclidean distance to another quaternion.
    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Slice coordinates `(u, v, I)` with `q = u + I v`, `v >= 0`. The axis is
    /// `None` when `q` is (numerically) real; then `v` is the tiny residual
    /// imaginary magnitude.
    pub fn slice_coords(self) -> (f64, f64, Option<ImaginaryUnit>) {
        let v = self.imag_norm();
        if self.is_real() {
            (self.q0, v, None)
        } else {
            let im = self.imag() / v;
            (self.q0, v, Some(ImaginaryUnit { q: im }))
        }
    }

    /// Rebuild a quaternion from slice coordinates.
    pub fn from_slice_coords(u: f64, v: f64, axis: ImaginaryUnit) -> Self {
        Quaternion::real(u) + axis.as_quat() * v
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.q0, self.q1, self.q2, self.q3)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.q0 - o.q0, self.q1 - o.q1, self.q2 - o.q2, self.q3 - o.q3)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.q0 * o.q0 - self.q1 * o.q1 - self.q2 * o.q2 - self.q3 * o.q3,
            self.q0 * o.q1 + self.q1 * o.q0 + self.q2 * o.q3 - self.q3 * o.q2,
            self.q0 * o.q2 - self.q1 * o.q3 + self.q2 * o.q0 + self.q3 * o.q1,
            self.q0 * o.q3 + self.q1 * o.q2 - self.q2 * o.q1 + self.q3 * o.q0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.q0 / s, self.q1 / s, self.q2 / s, self.q3 / s)
    }
}

/// A unit purely imaginary quaternion (a point of the 2-sphere of imaginary
/// units). Constructors normalize and reject near-zero directions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ImaginaryUnit {
    q: Quaternion,
}

impl TryFrom<[f64; 3]> for ImaginaryUnit {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<ImaginaryUnit> for [f64; 3] {
    fn from(i: ImaginaryUnit) -> Self {
        [i.q.q1, i.q.q2, i.q.q3]
    }
}

impl ImaginaryUnit {
    pub const E1: Self = Self { q: Quaternion::E1 };
    pub const E2: Self = Self { q: Quaternion::E2 };
    pub const E3: Self = Self { q: Quaternion::E3 };

    /// Unit from a 3-vector direction.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::UndefinedAxis(format!(
                "direction ({x}, {y}, {z}) cannot be normalized"
            )));
        }
        Ok(Self {
            q: Quaternion::new(0.0, x / n, y / n, z / n),
        })
    }

    /// Axis of a non-real quaternion, `imag(q)/|imag(q)|`.
    pub fn from_quat(q: Quaternion) -> Result<Self> {
        match q.slice_coords() {
            (_, _, Some(axis)) => Ok(axis),
            _ => Err(Error::UndefinedAxis(format!(
                "quaternion {q} is real; its axis is undefined"
            ))),
        }
    }

    pub fn as_quat(self) -> Quaternion {
        self.q
    }

    /// `true` when `self` and `other` span the same slice plane (equal up to
    /// sign, within the plane threshold).
    pub fn same_plane(self, other: Self) -> bool {
        let d = self.q.dist(other.q).min(self.q.dist(-other.q));
        d < tol::SAME_PLANE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn multiplication_table() {
        assert_eq!(Quaternion::E1 * Quaternion::E2, Quaternion::E3);
        assert_eq!(Quaternion::E2 * Quaternion::E3, Quaternion::E1);
        assert_eq!(Quaternion::E3 * Quaternion::E1, Quaternion::E2);
        assert_eq!(Quaternion::E1 * Quaternion::E1, -Quaternion::ONE);
        assert_eq!(Quaternion::E2 * Quaternion::E2, -Quaternion::ONE);
        assert_eq!(Quaternion::E3 * Quaternion::E3, -Quaternion::ONE);
        assert_eq!(Quaternion::E2 * Quaternion::E1, -Quaternion::E3);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert!(matches!(
            Quaternion::ZERO.conj_mod_inv(),
            Err(Error::ZeroInverse)
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let q = Quaternion::new(1.0, -2.0, 0.5, 3.0);
        let inv = q.conj_mod_inv().unwrap();
        assert_abs_diff_eq!((q * inv).dist(Quaternion::ONE), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((inv * q).dist(Quaternion::ONE), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn slice_coords_round_trip() {
        let q = Quaternion::new(0.3, -1.0, 2.0, 0.7);
        let (u, v, axis) = q.slice_coords();
        let axis = axis.unwrap();
        assert!(v > 0.0);
        let back = Quaternion::from_slice_coords(u, v, axis);
        assert_abs_diff_eq!(back.dist(q), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn real_detection_is_relative() {
        assert!(Quaternion::real(5.0).is_real());
        assert!(Quaternion::new(1e6, 1e-9, 0.0, 0.0).is_real());
        assert!(!Quaternion::new(0.0, 1e-9, 0.0, 0.0).is_real());
        assert!(Quaternion::new(1.0, 1e-14, 0.0, 0.0).slice_coords().2.is_none());
    }

    #[test]
    fn conj_antihomomorphism() {
        let a = Quaternion::new(0.2, 1.5, -0.4, 2.0);
        let b = Quaternion::new(-1.0, 0.3, 0.9, -0.5);
        assert_abs_diff_eq!(
            (a * b).conj().dist(b.conj() * a.conj()),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn powi_negative() {
        let q = Quaternion::new(0.5, 1.0, 0.0, -2.0);
        let lhs = q.powi(-3).unwrap();
        let rhs = q.powi(3).unwrap().conj_mod_inv().unwrap();
        assert_abs_diff_eq!(lhs.dist(rhs), 0.0, epsilon = 1e-13);
    }
}
