//! The four Cauchy-type kernels of the fine structure in closed form, their
//! singular-combination ("splitting") forms, and their power-series
//! expansions.
//!
//! * `S_L_inv` / `S_R_inv`: the left/right slice Cauchy kernels, each in two
//!   equivalent forms (I and II).
//! * `Q_c_inv`: the pseudo-Cauchy kernel `(p^2 - 2 q0 p + |q|^2)^{-n}`,
//!   reproducing axially harmonic functions.
//! * `F_L`: the Fueter kernel `-4 (p - conj q) Q_{c,p}^{-2}`, reproducing
//!   axially Fueter-regular functions (`Delta S_L_inv`).
//! * `P2_L`: the order-2 polyanalytic kernel `Dbar S_L_inv`.
//! * `E`: the Cauchy–Fueter kernel `conj(q)/|q|^4`.

use crate::error::Error;
use crate::families::{eval_family, FamilyId};
use crate::quat::Quaternion;
use crate::star::companion;
use crate::Result;

/// Kernel identifiers. The Roman numeral distinguishes the two closed forms
/// of the slice Cauchy kernels (they agree away from the sphere of `p`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelId {
    /// `(q^2 - 2 p0 q + |p|^2)^{-1} (conj p - q)`.
    SLInvI,
    /// `(p - conj q)(p^2 - 2 q0 p + |q|^2)^{-1}`.
    SLInvII,
    /// `(conj p - q)(q^2 - 2 p0 q + |p|^2)^{-1}`.
    SRInvI,
    /// `(p^2 - 2 q0 p + |q|^2)^{-1} (p - conj q)`.
    SRInvII,
    /// `(p^2 - 2 q0 p + |q|^2)^{-n}`, `n >= 1`.
    QcInv(u32),
    /// `-4 (p - conj q) Q_{c,p}^{-2}`.
    FL,
    /// `Dbar S_L_inv = 4 (p - conj q)(p - q0) Q_{c,p}^{-2}`.
    P2L,
    /// `conj(q)/|q|^4` (independent of `p`).
    E,
}

impl KernelId {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "S_L_inv" | "S_L_inv_I" => KernelId::SLInvI,
            "S_L_inv_II" => KernelId::SLInvII,
            "S_R_inv" | "S_R_inv_I" => KernelId::SRInvI,
            "S_R_inv_II" => KernelId::SRInvII,
            "Q_c_inv" => KernelId::QcInv(1),
            "F_L" => KernelId::FL,
            "P2_L" => KernelId::P2L,
            "E" => KernelId::E,
            _ => return Err(Error::Parse(format!("unknown kernel '{s}'"))),
        })
    }
}

/// Inverse powers of a companion-polynomial value, with a relative
/// singularity guard for `q` on the sphere of `p`.
fn guarded_inv_pow(c: Quaternion, scale: f64, e: u32) -> Result<Quaternion> {
    if c.norm() <= crate::tol::SPHERE_DIVISOR_REL * scale * scale {
        return Err(Error::SphericalSingularity { magnitude: c.norm() });
    }
    c.powi(-(e as i32))
}

/// Closed-form kernel evaluation. Requires `q` off the sphere of `p`
/// (and `q != 0` for `E`).
pub fn eval_kernel(id: KernelId, p: Quaternion, q: Quaternion) -> Result<Quaternion> {
    let scale = 1.0 + q.norm() + p.norm();
    // companion(q, p) = q^2 - 2 p0 q + |p|^2 vanishes on the same sphere.
    let inv_qp = |e: u32| guarded_inv_pow(companion(q, p), scale, e);
    let inv_pq = |e: u32| guarded_inv_pow(companion(p, q), scale, e);
    match id {
        KernelId::SLInvI => Ok(inv_qp(1)? * (p.conj() - q)),
        KernelId::SLInvII => Ok((p - q.conj()) * inv_pq(1)?),
        KernelId::SRInvI => Ok((p.conj() - q) * inv_qp(1)?),
        KernelId::SRInvII => Ok(inv_pq(1)? * (p - q.conj())),
        KernelId::QcInv(n) => {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "pseudo-Cauchy kernel power must be >= 1".into(),
                ));
            }
            inv_pq(n)
        }
        KernelId::FL => Ok((p - q.conj()) * inv_pq(2)? * -4.0),
        KernelId::P2L => {
            let d0 = dq0_s_l_inv(p, q)?;
            Ok((d0 + eval_kernel(KernelId::QcInv(1), p, q)?) * 2.0)
        }
        KernelId::E => {
            let n2 = q.norm_sqr();
            if n2.sqrt() <= crate::tol::SPHERE_DIVISOR_REL * scale * scale {
                return Err(Error::ZeroInverse);
            }
            Ok(q.conj() / (n2 * n2))
        }
    }
}

/// Closed form of `d/dq0 S_L_inv(p, q)`:
/// `-Q_{c,p}^{-1} + 2 (p - conj q)(p - q0) Q_{c,p}^{-2}`.
pub fn dq0_s_l_inv(p: Quaternion, q: Quaternion) -> Result<Quaternion> {
    let scale = 1.0 + q.norm() + p.norm();
    let inv1 = guarded_inv_pow(companion(p, q), scale, 1)?;
    let inv2 = guarded_inv_pow(companion(p, q), scale, 2)?;
    Ok(-inv1 + (p - q.conj()) * (p - Quaternion::real(q.q0)) * inv2 * 2.0)
}

/// Evaluate `Q_c_inv`, `P2_L` or `F_L` through its combination of slice
/// Cauchy kernel values at `q` and the slice-conjugate point:
///
/// * `Q_c_inv  = -(imag(q)^{-1}/2) (S_L_inv(p, conj q) - S_L_inv(p, q))`;
/// * `P2_L     = 2 d_q0 S_L_inv - imag(q)^{-1} (S_L_inv(p, conj q) - S_L_inv(p, q))`
///   (the diff-term coefficient is forced by `P2_L = 2 [d_q0 S_L_inv + Q_c_inv]`
///   together with the `Q_c_inv` combination above);
/// * `F_L      = -2 imag(q)^{-1} d_q0 S_L_inv - imag(q)^{-2} (S_L_inv(p, conj q) - S_L_inv(p, q))`.
///
/// Requires `q` non-real and off the sphere of `p`; must agree with
/// [`eval_kernel`].
pub fn kernel_splitting(id: KernelId, p: Quaternion, q: Quaternion) -> Result<Quaternion> {
    if q.is_real() {
        return Err(Error::UndefinedAxis(
            "kernel splittings need a non-real argument".into(),
        ));
    }
    let diff = eval_kernel(KernelId::SLInvI, p, q.conj())? - eval_kernel(KernelId::SLInvI, p, q)?;
    let iminv = q.imag().conj_mod_inv()?;
    match id {
        KernelId::QcInv(1) => Ok(iminv * diff * -0.5),
        KernelId::P2L => Ok(dq0_s_l_inv(p, q)? * 2.0 - iminv * diff),
        KernelId::FL => Ok(iminv * dq0_s_l_inv(p, q)? * -2.0 - iminv * iminv * diff),
        other => Err(Error::InvalidArgument(format!(
            "no splitting form for {other:?}"
        ))),
    }
}

/// The pseudo-Cauchy kernel as a quarter combination of the Fueter kernel:
/// `Q_c_inv = (1/4)(-F_L(p,q) p + q F_L(p,q))`.
pub fn kernel_connection(p: Quaternion, q: Quaternion) -> Result<Quaternion> {
    let fl = eval_kernel(KernelId::FL, p, q)?;
    Ok((-(fl * p) + q * fl) * 0.25)
}

/// Truncated power-series expansion of a kernel, with a geometric tail
/// estimate from the ratio of the last two terms.
///
/// The slice Cauchy, pseudo-Cauchy, polyanalytic and Fueter kernels expand in
/// negative powers of `p` for `|q| < |p|`:
///
/// * `S_L_inv = sum q^n p^{-1-n}`;
/// * `Q_c_inv = sum (n+1) H_n(q) p^{-2-n}` (the `+1` prefactor is forced by
///   `Q_c_inv(p, 0) = p^{-2}` and by termwise `D` of the `S_L_inv` series);
/// * `F_L = -2 sum (n+1)(n+2) CA_n(q) p^{-3-n}`;
/// * `P2_L = 2 sum (n+1) P2_n(q) p^{-2-n}`.
///
/// `E` expands around `1` for `|q - 1| < 1` as
/// `E(q) = sum (n+1)(n+2)/2 CA_n(1-q)`; the overall sign is fixed by the
/// oracle `F_L(0, q) = +4 E(q)` (direct evaluation of the closed Fueter
/// kernel at `p = 0`, also `E(1) = 1`).
pub fn kernel_series(
    id: KernelId,
    p: Quaternion,
    q: Quaternion,
    n_terms: usize,
) -> Result<(Quaternion, f64)> {
    let term: Box<dyn Fn(usize) -> Result<Quaternion>> = match id {
        KernelId::SLInvI | KernelId::SLInvII => {
            Box::new(move |n| Ok(q.powi(n as i32)? * p.powi(-1 - n as i32)?))
        }
        KernelId::QcInv(1) => Box::new(move |n| {
            Ok(eval_family(FamilyId::H, n, None, q)? * (n as f64 + 1.0) * p.powi(-2 - n as i32)?)
        }),
        KernelId::FL => Box::new(move |n| {
            let c = -2.0 * (n as f64 + 1.0) * (n as f64 + 2.0);
            Ok(eval_family(FamilyId::CA, n, None, q)? * c * p.powi(-3 - n as i32)?)
        }),
        KernelId::P2L => Box::new(move |n| {
            let c = 2.0 * (n as f64 + 1.0);
            Ok(eval_family(FamilyId::P2, n, None, q)? * c * p.powi(-2 - n as i32)?)
        }),
        KernelId::E => Box::new(move |n| {
            let c = (n as f64 + 1.0) * (n as f64 + 2.0) / 2.0;
            Ok(eval_family(FamilyId::CA, n, None, Quaternion::ONE - q)? * c)
        }),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no series expansion for {other:?}"
            )))
        }
    };
    let ratio = if let KernelId::E = id {
        (q - Quaternion::ONE).norm()
    } else {
        if q.norm() >= p.norm() {
            return Err(Error::OutsideRegion);
        }
        q.norm() / p.norm()
    };
    if ratio >= 1.0 {
        return Err(Error::OutsideRegion);
    }

    let n_terms = n_terms.max(2);
    let mut sum = Quaternion::ZERO;
    let mut comp = Quaternion::ZERO;
    let mut last = 0.0;
    let mut prev = 0.0;
    for n in 0..n_terms {
        let t = term(n)?;
        // Kahan-compensated accumulation
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        prev = last;
        last = t.norm();
    }
    let r = if prev > 0.0 && last / prev < 1.0 {
        last / prev
    } else {
        ratio
    };
    let tail = if r < 1.0 { last * r / (1.0 - r) } else { f64::INFINITY };
    Ok((sum, tail))
}
