//! First- and second-order operators on slice functions.
//!
//! * `D = d0 + e1 d1 + e2 d2 + e3 d3` (Cauchy–Fueter operator) and its
//!   conjugate `Dbar = d0 - e1 d1 - e2 d2 - e3 d3`.
//! * `Delta = D Dbar = Dbar D`, the 4-D Laplacian.
//! * The Euler operator `E = sum_k q_k d_k` (spatial), the Gamma operator and
//!   the left/right global operators characterizing slice regularity.
//!
//! Every operator has a finite-difference path ([`apply_numeric`]) usable on
//! any slice function, and closed-form actions ([`apply_exact`]) on star
//! powers and spherical blocks that serve as each other's oracles.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::families::{family_poly, FamilyId};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::slicefn::SliceFunction;
use crate::star::{companion, spherical_block, star_power};
use crate::Result;

/// Operator identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorId {
    /// Cauchy–Fueter operator.
    D,
    /// Conjugate Cauchy–Fueter operator.
    Dbar,
    /// 4-D Laplacian (`D Dbar`).
    Delta,
    /// Real partial derivative `d/dq0` (the slice derivative on slice-regular
    /// functions).
    Dq0,
    /// Spatial Euler operator `sum q_k d_k`.
    Euler,
    /// Gamma operator `-sum_{j<k} e_j e_k (q_j d_k - q_k d_j)`.
    Gamma,
    /// Left global operator `d0 + (imag(q)/|imag(q)|^2) E`.
    VLeft,
    /// Right global operator `d0 + E (imag(q)/|imag(q)|^2)` (vector factor on
    /// the right).
    VRight,
}

impl OperatorId {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "D" => OperatorId::D,
            "Dbar" => OperatorId::Dbar,
            "Delta" => OperatorId::Delta,
            "d_q0" | "Dq0" => OperatorId::Dq0,
            "Euler" => OperatorId::Euler,
            "Gamma" => OperatorId::Gamma,
            "V_left" | "VLeft" => OperatorId::VLeft,
            "V_right" | "VRight" => OperatorId::VRight,
            _ => return Err(Error::Parse(format!("unknown operator '{s}'"))),
        })
    }
}

/// Default finite-difference step at `q`.
pub fn default_step(q: Quaternion) -> f64 {
    1e-3 * (1.0 + q.norm())
}

/// Kahan-compensated quaternion accumulator.
#[derive(Default)]
struct Kahan {
    sum: Quaternion,
    c: Quaternion,
}

impl Kahan {
    fn add(&mut self, x: Quaternion) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// 4th-order central first derivative in coordinate `k`, with one Richardson
/// extrapolation level.
fn partial(f: &dyn SliceFunction, q: Quaternion, k: usize, h: f64) -> Quaternion {
    let stencil = |h: f64| -> Quaternion {
        let ev = |s: f64| f.eval(q.with_component(k, q.component(k) + s));
        (-ev(2.0 * h) + ev(h) * 8.0 - ev(-h) * 8.0 + ev(-2.0 * h)) / (12.0 * h)
    };
    let d1 = stencil(h);
    let d2 = stencil(h / 2.0);
    (d2 * 16.0 - d1) / 15.0
}

/// 4th-order central second derivative in coordinate `k`, with one Richardson
/// extrapolation level.
fn partial2(f: &dyn SliceFunction, q: Quaternion, k: usize, h: f64) -> Quaternion {
    let stencil = |h: f64| -> Quaternion {
        let ev = |s: f64| f.eval(q.with_component(k, q.component(k) + s));
        (-ev(2.0 * h) + ev(h) * 16.0 - ev(0.0) * 30.0 + ev(-h) * 16.0 - ev(-2.0 * h))
            / (12.0 * h * h)
    };
    let d1 = stencil(h);
    let d2 = stencil(h / 2.0);
    (d2 * 16.0 - d1) / 15.0
}

/// Apply an operator by finite differences. `h` defaults to
/// `1e-3 (1 + |q|)`. Contributions are accumulated in fixed ascending
/// coordinate order with compensated summation.
pub fn apply_numeric(
    op: OperatorId,
    f: &dyn SliceFunction,
    q: Quaternion,
    h: Option<f64>,
) -> Result<Quaternion> {
    let h = h.unwrap_or_else(|| default_step(q));
    let units = [Quaternion::E1, Quaternion::E2, Quaternion::E3];
    let mut acc = Kahan::default();
    match op {
        OperatorId::D => {
            acc.add(partial(f, q, 0, h));
            for k in 1..=3 {
                acc.add(units[k - 1] * partial(f, q, k, h));
            }
        }
        OperatorId::Dbar => {
            acc.add(partial(f, q, 0, h));
            for k in 1..=3 {
                acc.add(-(units[k - 1] * partial(f, q, k, h)));
            }
        }
        OperatorId::Delta => {
            for k in 0..=3 {
                acc.add(partial2(f, q, k, h));
            }
        }
        OperatorId::Dq0 => acc.add(partial(f, q, 0, h)),
        OperatorId::Euler => {
            for k in 1..=3 {
                acc.add(partial(f, q, k, h) * q.component(k));
            }
        }
        OperatorId::Gamma => {
            // -sum_{j<k} e_j e_k (q_j d_k - q_k d_j), coordinates ascending.
            for j in 1..=2 {
                for k in (j + 1)..=3 {
                    let term = partial(f, q, k, h) * q.component(j)
                        - partial(f, q, j, h) * q.component(k);
                    acc.add(-(units[j - 1] * units[k - 1] * term));
                }
            }
        }
        OperatorId::VLeft => {
            let im = q.imag();
            if q.is_real() {
                return Err(Error::UndefinedAxis(
                    "the global operator is undefined on the real axis".into(),
                ));
            }
            acc.add(partial(f, q, 0, h));
            let mut euler = Kahan::default();
            for k in 1..=3 {
                euler.add(partial(f, q, k, h) * q.component(k));
            }
            acc.add(im / im.norm_sqr() * euler.sum);
        }
        OperatorId::VRight => {
            let im = q.imag();
            if q.is_real() {
                return Err(Error::UndefinedAxis(
                    "the global operator is undefined on the real axis".into(),
                ));
            }
            acc.add(partial(f, q, 0, h));
            let mut euler = Kahan::default();
            for k in 1..=3 {
                euler.add(partial(f, q, k, h) * q.component(k));
            }
            acc.add(euler.sum * (im / im.norm_sqr()));
        }
    }
    Ok(acc.sum)
}

/// Targets with closed-form operator actions.
#[derive(Clone, Copy, Debug)]
pub enum ExactTarget {
    /// `(q - p)^{*n}` for any integer `n`.
    StarPower { p: Quaternion, n: i32 },
    /// `Q_p^n(q)` or `Q_p^n(q) (q - p)` for any integer `n`.
    Block {
        p: Quaternion,
        n: i32,
        linear_factor: bool,
    },
}

impl ExactTarget {
    /// Evaluate the target itself.
    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        match *self {
            ExactTarget::StarPower { p, n } => star_power(p, n, q),
            ExactTarget::Block { p, n, linear_factor } => {
                let b = spherical_block(p, n, q)?;
                Ok(if linear_factor { b * (q - p) } else { b })
            }
        }
    }

    /// The target as a slice function (negative powers have poles on the
    /// sphere of `p`; evaluation there fails inside `eval`, and the slice
    /// components fall back to zero which callers must avoid).
    pub fn as_fn(&self) -> ExactTargetFn {
        ExactTargetFn { target: *self }
    }
}

/// Slice-function adapter for an [`ExactTarget`].
pub struct ExactTargetFn {
    target: ExactTarget,
}

impl SliceFunction for ExactTargetFn {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        let i = Quaternion::E1;
        let qp = Quaternion::new(u, v, 0.0, 0.0);
        let qm = Quaternion::new(u, -v, 0.0, 0.0);
        let fp = self.target.eval(qp).unwrap_or(Quaternion::ZERO);
        let fm = self.target.eval(qm).unwrap_or(Quaternion::ZERO);
        let a = (fp + fm) * 0.5;
        let b = -(i * (fp - a));
        (a, b)
    }

    fn eval(&self, q: Quaternion) -> Quaternion {
        self.target.eval(q).unwrap_or(Quaternion::ZERO)
    }
}

/// Closed-form operator action on a target, where one is known.
///
/// For star powers around `p` (`m = |n|`):
///
/// * `D (q-p)^{*n} = -2n Ht_{n-1}`, and for negative powers
///   `D (q-p)^{-*m} = 2 Hcal_m Q_{c,p}^{-m}`;
/// * `Dbar (q-p)^{*n} = 2n P2t_{n-1}`, `Dbar (q-p)^{-*m} = -2 R2_m Q_{c,p}^{-m-1}`;
/// * `Delta (q-p)^{*n} = -2n(n-1) Qt_{n-2}`, `Delta (q-p)^{-*m} = -4 Mcal_m Q_{c,p}^{-m-1}`;
/// * `d_q0 (q-p)^{*n} = n (q-p)^{*(n-1)}` for every integer `n`;
/// * `V_left (q-p)^{*n} = 0` (star powers are slice regular).
///
/// Spherical blocks `Q^n = Q_p^n(q)` (any integer `n`), with or without the
/// linear factor `(q - p)`, are slice regular in `q`, so the closed actions
/// come from the representation formulas together with the closed slice
/// derivative `d_q0`:
///
/// * `D g = imag(q)^{-1} (g(conj q) - g(q))` (limit `-2 g'` on the real axis);
/// * `Dbar g = 2 d_q0 g - D g`;
/// * `Delta g = |imag(q)|^{-2} I_q (2 |imag(q)| d_q0 g(q) - I_q (g(conj q) - g(q)))`
///   (limit `-2 g''` on the real axis).
///
/// A frequently printed shortcut `D Q^n = -4n Q^{n-1} (q0 - p0)` (and its
/// `Dbar`/`Delta` companions) relies on the chain rule
/// `d_i(Q^n) = n Q^{n-1} d_i Q`, which fails for `|n| >= 2` because `Q` does
/// not commute with `d_i Q`; the finite-difference oracle confirms the
/// representation-formula versions, which the shortcut matches only for
/// `|n| <= 1`.
pub fn apply_exact(op: OperatorId, target: ExactTarget, q: Quaternion) -> Result<Quaternion> {
    match target {
        ExactTarget::StarPower { p, n } => exact_on_star_power(op, p, n, q),
        ExactTarget::Block { p, n, linear_factor } => exact_on_block(op, p, n, linear_factor, q),
    }
}

fn exact_on_star_power(op: OperatorId, p: Quaternion, n: i32, q: Quaternion) -> Result<Quaternion> {
    let fam = |id: FamilyId, k: usize| -> Result<Quaternion> {
        Ok(family_poly(id, k, p)?.eval(q))
    };
    let comp_pow = |e: i32| -> Result<Quaternion> {
        let c = companion(p, q);
        if e < 0 && c.norm() <= crate::tol::SPHERE_DIVISOR_REL * (1.0 + q.norm() + p.norm()).powi(2) {
            return Err(Error::SphericalSingularity { magnitude: c.norm() });
        }
        c.powi(e)
    };
    match op {
        OperatorId::D => {
            if n == 0 {
                Ok(Quaternion::ZERO)
            } else if n > 0 {
                Ok(fam(FamilyId::Ht, (n - 1) as usize)? * (-2.0 * n as f64))
            } else {
                let m = (-n) as usize;
                Ok(fam(FamilyId::Hcal, m)? * 2.0 * comp_pow(n)?)
            }
        }
        OperatorId::Dbar => {
            if n == 0 {
                Ok(Quaternion::ZERO)
            } else if n > 0 {
                Ok(fam(FamilyId::P2t, (n - 1) as usize)? * (2.0 * n as f64))
            } else {
                let m = (-n) as usize;
                Ok(fam(FamilyId::R2, m)? * (-2.0) * comp_pow(n - 1)?)
            }
        }
        OperatorId::Delta => {
            if n == 0 || n == 1 {
                Ok(Quaternion::ZERO)
            } else if n > 1 {
                Ok(fam(FamilyId::Qt, (n - 2) as usize)? * (-2.0 * n as f64 * (n as f64 - 1.0)))
            } else {
                let m = (-n) as usize;
                Ok(fam(FamilyId::Mcal, m)? * (-4.0) * comp_pow(n - 1)?)
            }
        }
        OperatorId::Dq0 => {
            if n == 0 {
                Ok(Quaternion::ZERO)
            } else {
                Ok(star_power(p, n - 1, q)? * n as f64)
            }
        }
        OperatorId::VLeft => Ok(Quaternion::ZERO),
        other => Err(Error::UnsupportedExact(format!(
            "{other:?} on star powers"
        ))),
    }
}

fn exact_on_block(
    op: OperatorId,
    p: Quaternion,
    n: i32,
    linear: bool,
    q: Quaternion,
) -> Result<Quaternion> {
    let p0 = p.q0;
    let nf = n as f64;
    let bl = |e: i32| spherical_block(p, e, q);
    let qmp0 = q - Quaternion::real(p0); // q - p0

    // closed slice derivative d_q0 g (the block commutes with q - p0)
    let d_q0 = || -> Result<Quaternion> {
        let core = bl(n - 1)? * (2.0 * nf) * qmp0;
        if linear {
            Ok(core * (q - p) + bl(n)?)
        } else {
            Ok(core)
        }
    };
    // closed second slice derivative d_q0^2 g
    let d_q0_sq = || -> Result<Quaternion> {
        let core = bl(n - 2)? * (4.0 * nf * (nf - 1.0)) * qmp0 * qmp0 + bl(n - 1)? * (2.0 * nf);
        if linear {
            Ok(core * (q - p) + bl(n - 1)? * (4.0 * nf) * qmp0)
        } else {
            Ok(core)
        }
    };

    if let OperatorId::Dq0 = op {
        return d_q0();
    }
    if !matches!(op, OperatorId::D | OperatorId::Dbar | OperatorId::Delta) {
        return Err(Error::UnsupportedExact(format!("{op:?} on spherical blocks")));
    }

    if q.is_real() {
        // real-axis limits of the representation formulas
        return match op {
            OperatorId::D => Ok(d_q0()? * -2.0),
            OperatorId::Dbar => Ok(d_q0()? * 4.0),
            _ => Ok(d_q0_sq()? * -2.0),
        };
    }

    // g at the slice-conjugate point
    let qc = q.conj();
    let g_conj = {
        let b = spherical_block(p, n, qc)?;
        if linear { b * (qc - p) } else { b }
    };
    let g_here = {
        let b = bl(n)?;
        if linear { b * (q - p) } else { b }
    };
    let diff = g_conj - g_here;
    let iminv = q.imag().conj_mod_inv()?;

    match op {
        OperatorId::D => Ok(iminv * diff),
        OperatorId::Dbar => Ok(d_q0()? * 2.0 - iminv * diff),
        _ => {
            // Delta g = v^{-2} (2 v I_q d_q0 g + (g(conj q) - g(q)))
            let v = q.imag_norm();
            let iq = q.imag() / v;
            Ok((iq * d_q0()? * (2.0 * v) + diff) / (v * v))
        }
    }
}

/// Powers of the right global operator in the center variable applied to a
/// spherical block:
///
/// `V_p^m Q_p^n(q) = (-2)^m n(n-1)...(n-m+1) Q_p^{n-m}(q) (q-p)^{*m}`, and
/// with the linear factor
/// `V_p^m [Q_p^n(q) (q-p)] = (-2)^m n(n-1)...(n-m+1) Q_p^{n-m}(q) (q-p)^{*(m+1)}`.
///
/// Requires `0 <= m <= n` and a non-real `p`.
pub fn global_power_on_block(
    m: u32,
    n: u32,
    p: Quaternion,
    q: Quaternion,
    with_linear_factor: bool,
) -> Result<Quaternion> {
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "global operator power m={m} exceeds block degree n={n}"
        )));
    }
    let mut falling = 1.0;
    for k in 0..m {
        falling *= (n - k) as f64;
    }
    let coeff = (-2.0f64).powi(m as i32) * falling;
    let star_exp = m as i32 + if with_linear_factor { 1 } else { 0 };
    Ok(spherical_block(p, (n - m) as i32, q)? * coeff * star_power(p, star_exp, q)?)
}

/// Representation formulas for the three derived classes: evaluate `D f`,
/// `Dbar f` or `Delta f` at `q` from the values of the slice-regular `f` on a
/// single plane `I`:
///
/// * `D f(q) = -imag(q)^{-1} I_q I [f(u-Iv) - f(u+Iv)]`,
/// * `Dbar f(q) = 2 du f(u+Iv) + imag(q)^{-1} I_q I [f(u-Iv) - f(u+Iv)]`,
/// * `Delta f(q) = |imag(q)|^{-2} I_q (2 |imag(q)| du f(q) - I [f(u-Iv) - f(u+Iv)])`,
///
/// with the real-axis limits `-2 du f`, `4 du f` and `-2 du^2 f`.
pub fn rep_formula(
    op: OperatorId,
    f: &dyn SliceFunction,
    q: Quaternion,
    plane: Option<ImaginaryUnit>,
) -> Result<Quaternion> {
    let (u, v, axis) = q.slice_coords();
    let h = default_step(q);
    // derivative of the components in u
    let du = |w: f64| -> (Quaternion, Quaternion) {
        let stencil = |h: f64| {
            let c = |s: f64| f.components(u + s, w);
            let (a2p, b2p) = c(2.0 * h);
            let (ap, bp) = c(h);
            let (am, bm) = c(-h);
            let (a2m, b2m) = c(-2.0 * h);
            (
                (-a2p + ap * 8.0 - am * 8.0 + a2m) / (12.0 * h),
                (-b2p + bp * 8.0 - bm * 8.0 + b2m) / (12.0 * h),
            )
        };
        let (a1, b1) = stencil(h);
        let (a2, b2) = stencil(h / 2.0);
        ((a2 * 16.0 - a1) / 15.0, (b2 * 16.0 - b1) / 15.0)
    };
    match axis {
        None => {
            let (au, _) = du(0.0);
            match op {
                OperatorId::D => Ok(au * -2.0),
                OperatorId::Dbar => Ok(au * 4.0),
                OperatorId::Delta => {
                    // -2 d^2/du^2 f on the real axis
                    let stencil = |h: f64| {
                        let a = |s: f64| f.components(u + s, 0.0).0;
                        (-a(2.0 * h) + a(h) * 16.0 - a(0.0) * 30.0 + a(-h) * 16.0 - a(-2.0 * h))
                            / (12.0 * h * h)
                    };
                    let d1 = stencil(h);
                    let d2 = stencil(h / 2.0);
                    Ok((d2 * 16.0 - d1) / 15.0 * -2.0)
                }
                other => Err(Error::UnsupportedExact(format!(
                    "{other:?} has no representation formula"
                ))),
            }
        }
        Some(iq) => {
            let i = plane.unwrap_or(iq).as_quat();
            let iq = iq.as_quat();
            let (a, b) = f.components(u, v);
            let fp = a + i * b;
            let fm = a - i * b;
            let im = q.imag();
            let iminv = im.conj_mod_inv()?;
            let diff = fm - fp;
            match op {
                OperatorId::D => Ok(-(iminv * iq * i * diff)),
                OperatorId::Dbar => {
                    // 2 du f taken at q itself (= 2 d0 f for slice-regular f)
                    let (au, bu) = du(v);
                    let fq_u = au + iq * bu;
                    Ok(fq_u * 2.0 + iminv * iq * i * diff)
                }
                OperatorId::Delta => {
                    let (au, bu) = du(v);
                    let fq_u = au + iq * bu; // du f at q itself
                    let inner = fq_u * (2.0 * v) - i * diff;
                    Ok(iq * inner / (v * v))
                }
                other => Err(Error::UnsupportedExact(format!(
                    "{other:?} has no representation formula"
                ))),
            }
        }
    }
}

/// Residuals of the Euler/Gamma structure identities at a non-real `q`, for a
/// slice-regular `f`:
///
/// * splitting of the spatial Dirac part:
///   `(D - d0) f = (imag(q)/|imag(q)|^2)(E + Gamma) f` (any smooth `f`);
/// * annihilation by the left global operator:
///   `d0 f + (imag(q)/|imag(q)|^2) E f = 0`;
/// * `D f = -imag(q)^{-1} Gamma f`;
/// * `Dbar f = imag(q)^{-1} (2 E + Gamma) f`.
///
/// Returns the largest residual norm.
pub fn euler_gamma_identities(f: &dyn SliceFunction, q: Quaternion, h: Option<f64>) -> Result<f64> {
    if q.is_real() {
        return Err(Error::UndefinedAxis(
            "Euler/Gamma identities need a non-real q".into(),
        ));
    }
    let im = q.imag();
    let w = im / im.norm_sqr();
    let iminv = im.conj_mod_inv()?;
    let df = apply_numeric(OperatorId::D, f, q, h)?;
    let dbf = apply_numeric(OperatorId::Dbar, f, q, h)?;
    let d0f = apply_numeric(OperatorId::Dq0, f, q, h)?;
    let ef = apply_numeric(OperatorId::Euler, f, q, h)?;
    let gf = apply_numeric(OperatorId::Gamma, f, q, h)?;
    let r1 = ((df - d0f) - w * (ef + gf)).norm();
    let r2 = (d0f + w * ef).norm();
    let r3 = (df + iminv * gf).norm();
    let r4 = (dbf - iminv * (ef * 2.0 + gf)).norm();
    Ok(r1.max(r2).max(r3).max(r4))
}
