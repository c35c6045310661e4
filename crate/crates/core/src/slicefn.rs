//! Slice functions as `(u, v) -> (A, B)` evaluators.
//!
//! A slice function takes the form `f(u + I v) = A(u, v) + I B(u, v)` for
//! every imaginary unit `I`, with quaternion-valued components satisfying the
//! even/odd parity `A(u, -v) = A(u, v)`, `B(u, -v) = -B(u, v)`. All the star
//! calculus and the operator machinery consume this interface.

use num_complex::Complex64;

use crate::quat::Quaternion;

/// A function of axial form, described by its slice components.
pub trait SliceFunction {
    /// Components `(A, B)` with `f(u + I v) = A + I B` for every unit `I`.
    ///
    /// Implementations must honor the parity contract: `A` even and `B` odd
    /// in `v` (so `B(u, 0) = 0`).
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion);

    /// Evaluate at an arbitrary quaternion through the slice decomposition.
    fn eval(&self, q: Quaternion) -> Quaternion {
        let (u, v, axis) = q.slice_coords();
        match axis {
            None => self.components(u, 0.0).0,
            Some(i) => {
                let (a, b) = self.components(u, v);
                a + i.as_quat() * b
            }
        }
    }
}

impl<F: SliceFunction + ?Sized> SliceFunction for &F {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        (**self).components(u, v)
    }
}

impl<F: SliceFunction + ?Sized> SliceFunction for Box<F> {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        (**self).components(u, v)
    }
}

/// Polynomial `f(q) = sum_n q^n a_n` with quaternion coefficients on the
/// right; the basic example of a (left) slice-regular function.
#[derive(Clone, Debug, Default)]
pub struct MonomialSum {
    pub coeffs: Vec<Quaternion>,
}

impl MonomialSum {
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        Self { coeffs }
    }

    /// The monomial `q^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Quaternion::ZERO; n + 1];
        coeffs[n] = Quaternion::ONE;
        Self { coeffs }
    }

    pub fn constant(c: Quaternion) -> Self {
        Self { coeffs: vec![c] }
    }
}

impl SliceFunction for MonomialSum {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        let z = Complex64::new(u, v);
        let mut zn = Complex64::new(1.0, 0.0);
        let mut a = Quaternion::ZERO;
        let mut b = Quaternion::ZERO;
        for &c in &self.coeffs {
            a += c * zn.re;
            b += c * zn.im;
            zn *= z;
        }
        (a, b)
    }
}

/// Wraps a pointwise evaluator `H -> H` that is known to be a slice function;
/// the components are reconstructed from the two evaluations on the `e1`
/// plane. The parity/axiality contract is the caller's responsibility.
pub struct PointwiseSlice<F: Fn(Quaternion) -> Quaternion> {
    f: F,
}

impl<F: Fn(Quaternion) -> Quaternion> PointwiseSlice<F> {
    pub fn new(f: F) -> Self {
        Self { f }
    }
}

impl<F: Fn(Quaternion) -> Quaternion> SliceFunction for PointwiseSlice<F> {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        let i = Quaternion::E1;
        let fp = (self.f)(Quaternion::real(u) + i * v);
        let fm = (self.f)(Quaternion::real(u) - i * v);
        let a = (fp + fm) * 0.5;
        // B = I^{-1} (f(u+Iv) - A) = -e1 (fp - A)
        let b = -(i * (fp - a));
        (a, b)
    }
}
