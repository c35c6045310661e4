//! Star calculus: star products, star powers around a center, spherical
//! blocks and the representation formula.
//!
//! The (left) star product of slice functions `f = A + I B`, `g = A' + I B'`
//! is `f * g = (A A' - B B') + I (A B' + B A')`; it preserves slice form while
//! the pointwise product does not. For an intrinsic `f` (real-valued
//! components) the star product collapses to the pointwise product.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::binomial;
use crate::error::Error;
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::slicefn::SliceFunction;
use crate::tol;
use crate::Result;

/// Center of a star expansion: `p = p0 + I_p p1` with `p1 >= 0`; the axis is
/// absent exactly when the center is real (`p1 = 0`).
#[derive(Clone, Copy, Debug)]
pub struct StarCenter {
    p0: f64,
    p1: f64,
    axis: Option<ImaginaryUnit>,
}

impl StarCenter {
    pub fn new(p0: f64, p1: f64, axis: Option<ImaginaryUnit>) -> Result<Self> {
        if p1 < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "star center needs p1 >= 0, got {p1}"
            )));
        }
        if p1 > 0.0 && axis.is_none() {
            return Err(Error::InvalidArgument(
                "non-real star center needs an axis".into(),
            ));
        }
        let axis = if p1 == 0.0 { None } else { axis };
        Ok(Self { p0, p1, axis })
    }

    pub fn from_quat(p: Quaternion) -> Self {
        let (p0, p1, axis) = p.slice_coords();
        match axis {
            Some(a) => Self { p0, p1, axis: Some(a) },
            None => Self { p0, p1: 0.0, axis: None },
        }
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn axis(&self) -> Option<ImaginaryUnit> {
        self.axis
    }

    pub fn is_real(&self) -> bool {
        self.axis.is_none()
    }

    pub fn quat(&self) -> Quaternion {
        match self.axis {
            Some(a) => Quaternion::from_slice_coords(self.p0, self.p1, a),
            None => Quaternion::real(self.p0),
        }
    }
}

/// Companion divisor `Q_{c,p}(q) = p^2 - 2 q0 p + |q|^2`, the symmetrization
/// of `q - p` in the variable-`q` star calculus. It vanishes exactly on the
/// sphere of `p`.
pub fn companion(p: Quaternion, q: Quaternion) -> Quaternion {
    p * p - p * (2.0 * q.q0) + Quaternion::real(q.norm_sqr())
}

fn companion_checked(p: Quaternion, q: Quaternion) -> Result<Quaternion> {
    let c = companion(p, q);
    let scale = (1.0 + q.norm() + p.norm()).powi(2);
    if c.norm() <= tol::SPHERE_DIVISOR_REL * scale {
        return Err(Error::SphericalSingularity { magnitude: c.norm() });
    }
    Ok(c)
}

/// Star power `(q - p)^{*n}` around `p`, for any integer `n`.
///
/// Non-negative powers use the signed binomial expansion
/// `sum_r C(n,r) q^r p^{n-r} (-1)^{n-r}`; negative powers use
/// `(q - p)^{-*n} = (conj(q) - p)^{*n} Q_{c,p}(q)^{-n}`, which fails on the
/// sphere of `p` where the companion divisor vanishes.
pub fn star_power(p: Quaternion, n: i32, q: Quaternion) -> Result<Quaternion> {
    if n >= 0 {
        Ok(star_power_nonneg(p, n as u32, q))
    } else {
        let m = n.unsigned_abs();
        let c = companion_checked(p, q)?;
        let num = star_power_nonneg(p, m, q.conj());
        Ok(num * c.inverse()?.powi(m as i32)?)
    }
}

fn star_power_nonneg(p: Quaternion, n: u32, q: Quaternion) -> Quaternion {
    let mut qr = Quaternion::ONE; // q^r
    let mut pow_p = vec![Quaternion::ONE]; // p^k
    for k in 1..=n {
        pow_p.push(pow_p[(k - 1) as usize] * p);
    }
    let mut acc = Quaternion::ZERO;
    for r in 0..=n {
        let sign = if (n - r) % 2 == 0 { 1.0 } else { -1.0 };
        acc += qr * pow_p[(n - r) as usize] * (binomial(n, r) * sign);
        qr = qr * q;
    }
    acc
}

/// Spherical block `Q_p^n(q) = ((q - p0)^2 + p1^2)^n` for any integer `n`.
pub fn spherical_block(p: Quaternion, n: i32, q: Quaternion) -> Result<Quaternion> {
    let (p0, p1, _) = p.slice_coords();
    let d = q - Quaternion::real(p0);
    let base = d * d + Quaternion::real(p1 * p1);
    if n < 0 {
        let scale = (1.0 + q.norm() + p.norm()).powi(2);
        if base.norm() <= tol::SPHERE_DIVISOR_REL * scale {
            return Err(Error::SphericalSingularity { magnitude: base.norm() });
        }
    }
    base.powi(n)
}

/// Star product of two slice functions, evaluated at `q`.
pub fn star_mul_left(
    f: &dyn SliceFunction,
    g: &dyn SliceFunction,
    q: Quaternion,
) -> Quaternion {
    StarProduct::borrowed(f, g).eval(q)
}

/// The star product as a slice function.
pub struct StarProduct<F, G> {
    f: F,
    g: G,
}

impl<F: SliceFunction, G: SliceFunction> StarProduct<F, G> {
    pub fn new(f: F, g: G) -> Self {
        Self { f, g }
    }
}

impl<'a> StarProduct<&'a dyn SliceFunction, &'a dyn SliceFunction> {
    pub fn borrowed(f: &'a dyn SliceFunction, g: &'a dyn SliceFunction) -> Self {
        Self { f, g }
    }
}

impl<F: SliceFunction, G: SliceFunction> SliceFunction for StarProduct<F, G> {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        let (a, b) = self.f.components(u, v);
        let (a1, b1) = self.g.components(u, v);
        (a * a1 - b * b1, a * b1 + b * a1)
    }
}

/// Star conjugate `f^c` as a slice function: components `(conj(A), conj(B))`.
pub struct StarConjugate<F>(pub F);

impl<F: SliceFunction> SliceFunction for StarConjugate<F> {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        let (a, b) = self.0.components(u, v);
        (a.conj(), b.conj())
    }
}

/// Unary star operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarUnary {
    /// `f^c`, conjugating the slice components.
    Conjugate,
    /// `f^s = f * f^c`, an intrinsic function.
    Symmetrization,
    /// `f^{-*} = (f^s)^{-1} f^c`, the star inverse.
    StarInverse,
}

/// Evaluate a unary star operation at `q`. The star inverse fails with a
/// singularity error (carrying `|f^s(q)|`) where the symmetrization is
/// numerically zero.
pub fn star_unary(f: &dyn SliceFunction, op: StarUnary, q: Quaternion) -> Result<Quaternion> {
    let (u, v, axis) = q.slice_coords();
    let v = if axis.is_none() { 0.0 } else { v };
    let (a, b) = f.components(u, v);
    let (ac, bc) = (a.conj(), b.conj());
    let assemble = |x: Quaternion, y: Quaternion| match axis {
        Some(i) => x + i.as_quat() * y,
        None => x,
    };
    match op {
        StarUnary::Conjugate => Ok(assemble(ac, bc)),
        StarUnary::Symmetrization => Ok(assemble(a * ac - b * bc, a * bc + b * ac)),
        StarUnary::StarInverse => {
            // f^s is intrinsic: real components (s, t).
            let s = (a * ac - b * bc).q0;
            let t = (a * bc + b * ac).q0;
            let d = s * s + t * t;
            if d.sqrt() <= tol::STAR_SYMM_MIN {
                return Err(Error::StarSingularity { magnitude: d.sqrt() });
            }
            // (f^s)^{-1} has real components (s, -t)/d; star-multiplying the
            // conjugate gives (ia*ac - ib*bc) + I (ia*bc + ib*ac).
            let (ia, ib) = (s / d, -t / d);
            Ok(assemble(ac * ia - bc * ib, bc * ia + ac * ib))
        }
    }
}

/// Representation formula: recover `f` on the whole sphere of `u + J v` from
/// its two values on one plane:
/// `f(q) = (f(u+Jv) + f(u-Jv))/2 + (I_q J / 2)(f(u-Jv) - f(u+Jv))`.
pub fn representation_eval(
    f_plus: Quaternion,
    f_minus: Quaternion,
    plane: ImaginaryUnit,
    target_axis: ImaginaryUnit,
) -> Quaternion {
    let avg = (f_plus + f_minus) * 0.5;
    let swing = target_axis.as_quat() * plane.as_quat() * (f_minus - f_plus) * 0.5;
    avg + swing
}

/// Bivariate polynomial in the commuting pair `(q, conj(q))` with quaternion
/// coefficients on the right: `f = sum q^j conj(q)^k c_{jk}`.
///
/// On a slice `q = u + I v` every monomial has complex part
/// `z^j conj(z)^k`, so these are slice functions, and the (left) star product
/// is exponent convolution with coefficients multiplied in order. This is the
/// workhorse representation behind the polynomial families: iterated star
/// products of `(q - p)` and `(conj(q) - p)` live here.
#[derive(Clone, Debug, Default)]
pub struct QQbarPoly {
    terms: BTreeMap<(u32, u32), Quaternion>,
}

impl QQbarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Quaternion) -> Self {
        let mut p = Self::default();
        p.add_term(0, 0, c);
        p
    }

    /// `q - p`.
    pub fn q_minus(p: Quaternion) -> Self {
        let mut f = Self::default();
        f.add_term(1, 0, Quaternion::ONE);
        f.add_term(0, 0, -p);
        f
    }

    /// `conj(q) - p`.
    pub fn qbar_minus(p: Quaternion) -> Self {
        let mut f = Self::default();
        f.add_term(0, 1, Quaternion::ONE);
        f.add_term(0, 0, -p);
        f
    }

    pub fn add_term(&mut self, j: u32, k: u32, c: Quaternion) {
        let e = self.terms.entry((j, k)).or_insert(Quaternion::ZERO);
        *e += c;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(j, k), &c) in &other.terms {
            out.add_term(j, k, c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = *c * s;
        }
        out
    }

    /// Right-multiply every coefficient by `c`.
    pub fn mul_coeff(&self, c: Quaternion) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = *v * c;
        }
        out
    }

    /// Left star product; coefficients multiply in order (left factor first).
    pub fn star_mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(j, k), &c) in &self.terms {
            for (&(j2, k2), &d) in &other.terms {
                out.add_term(j + j2, k + k2, c * d);
            }
        }
        out
    }

    pub fn star_pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(Quaternion::ONE);
        for _ in 0..n {
            acc = acc.star_mul(self);
        }
        acc
    }

    /// Termwise real derivative `d/dq0`: lowers each exponent.
    pub fn d_q0(&self) -> Self {
        let mut out = Self::default();
        for (&(j, k), &c) in &self.terms {
            if j > 0 {
                out.add_term(j - 1, k, c * j as f64);
            }
            if k > 0 {
                out.add_term(j, k - 1, c * k as f64);
            }
        }
        out
    }
}

impl SliceFunction for QQbarPoly {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        let z = Complex64::new(u, v);
        let zb = z.conj();
        let mut a = Quaternion::ZERO;
        let mut b = Quaternion::ZERO;
        for (&(j, k), &c) in &self.terms {
            let m = z.powu(j) * zb.powu(k);
            a += c * m.re;
            b += c * m.im;
        }
        (a, b)
    }
}
