//! The polynomial families spanning the three derived function classes.
//!
//! One-variable families (centered at the origin):
//!
//! * `H_n` — axially harmonic, Appell for `d/dq0`; `D(q^n) = -2n H_{n-1}`.
//! * `CA_n` — the Clifford–Appell sequence; axially Fueter regular and
//!   `Delta(q^n) = -2n(n-1) CA_{n-2}`.
//! * `P2_n = q^n + H_n` — axially polyanalytic of order 2;
//!   `Dbar(q^n) = 2n P2_{n-1}`.
//! * `Pneg_n`, `S_n`, `R_n` — the companions appearing in `D`, `Delta`,
//!   `Dbar` applied to negative powers `q^{-n}`.
//!
//! Two-variable families (centered at `p`) generalize these with star powers
//! of `(q - p)` and `(conj(q) - p)`; at `p = 0` they collapse to the
//! one-variable families. Evaluation goes through the defining sums; closed
//! forms (valid off the real axis) are exposed separately as cross-checks.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::quat::Quaternion;
use crate::slicefn::SliceFunction;
use crate::star::QQbarPoly;
use crate::Result;

/// Identifiers for the polynomial families.
///
/// `H`, `CA`, `P2`, `Pneg`, `S`, `R` are one-variable; `Ht`, `Qt`, `P2t`,
/// `Hcal`, `Mcal`, `R2` are their two-variable versions around a center `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    /// Harmonic Appell polynomials `H_n`.
    H,
    /// Clifford–Appell (axially Fueter regular) polynomials.
    CA,
    /// Polyanalytic polynomials `q^n + H_n`.
    P2,
    /// `D(q^{-n}) = 2 Pneg_n |q|^{-2n}` companions.
    Pneg,
    /// `Delta(q^{-n}) = -4 S_n |q|^{-2(n+1)}` companions.
    S,
    /// `Dbar(q^{-n}) = -2 R_n |q|^{-2(n+1)}` companions.
    R,
    /// Two-variable harmonic polynomials `Ht_n(q, p)`.
    Ht,
    /// Two-variable Fueter-regular polynomials `Qt_n(q, p)`.
    Qt,
    /// Two-variable polyanalytic polynomials `P2t_n(q, p)`.
    P2t,
    /// Negative-power harmonic companions `Hcal_n(q, p)`.
    Hcal,
    /// Negative-power Fueter-regular companions `Mcal_n(q, p)`.
    Mcal,
    /// Negative-power polyanalytic companions `R2_n(q, p)`.
    R2,
}

impl FamilyId {
    pub fn is_two_variable(self) -> bool {
        matches!(
            self,
            FamilyId::Ht | FamilyId::Qt | FamilyId::P2t | FamilyId::Hcal | FamilyId::Mcal | FamilyId::R2
        )
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "H" => FamilyId::H,
            "CA" => FamilyId::CA,
            "P2" => FamilyId::P2,
            "Pneg" => FamilyId::Pneg,
            "S" => FamilyId::S,
            "R" => FamilyId::R,
            "Ht" => FamilyId::Ht,
            "Qt" => FamilyId::Qt,
            "P2t" => FamilyId::P2t,
            "Hcal" => FamilyId::Hcal,
            "Mcal" => FamilyId::Mcal,
            "R2" => FamilyId::R2,
            _ => {
                return Err(Error::Parse(format!(
                    "unknown family '{s}' (expected one of H CA P2 Pneg S R Ht Qt P2t Hcal Mcal R2)"
                )))
            }
        })
    }
}

/// Evaluate a family member through its defining sum. Two-variable families
/// require a center `p` (one-variable families ignore it / default to 0).
pub fn eval_family(id: FamilyId, n: usize, p: Option<Quaternion>, q: Quaternion) -> Result<Quaternion> {
    let p = p.unwrap_or(Quaternion::ZERO);
    if id.is_two_variable() {
        return Ok(family_poly(id, n, p)?.eval(q));
    }
    let qc = q.conj();
    let pow = |base: Quaternion, k: usize| -> Quaternion {
        let mut acc = Quaternion::ONE;
        for _ in 0..k {
            acc = acc * base;
        }
        acc
    };
    Ok(match id {
        FamilyId::H => {
            // (1/(n+1)) sum_{k=1}^{n+1} conj(q)^{k-1} q^{n+1-k}
            let mut acc = Quaternion::ZERO;
            for k in 1..=n + 1 {
                acc += pow(qc, k - 1) * pow(q, n + 1 - k);
            }
            acc / (n as f64 + 1.0)
        }
        FamilyId::CA => {
            // (2/((n+1)(n+2))) sum_{j=0}^{n} (n-j+1) q^{n-j} conj(q)^j
            let mut acc = Quaternion::ZERO;
            for j in 0..=n {
                acc += pow(q, n - j) * pow(qc, j) * (n as f64 - j as f64 + 1.0);
            }
            acc * (2.0 / ((n as f64 + 1.0) * (n as f64 + 2.0)))
        }
        FamilyId::P2 => pow(q, n) + eval_family(FamilyId::H, n, None, q)?,
        FamilyId::Pneg => {
            // sum_{i=1}^{n} conj(q)^{n-i} q^{i-1}
            let mut acc = Quaternion::ZERO;
            for i in 1..=n {
                acc += pow(qc, n - i) * pow(q, i - 1);
            }
            acc
        }
        FamilyId::S => {
            // sum_{j=0}^{n} (n-j) conj(q)^{n-j} q^j
            let mut acc = Quaternion::ZERO;
            for j in 0..=n {
                acc += pow(qc, n - j) * pow(q, j) * (n as f64 - j as f64);
            }
            acc
        }
        FamilyId::R => {
            // n conj(q)^{n+1} + sum_{i=0}^{n-1} conj(q)^{n-i} q^{i+1}
            let mut acc = pow(qc, n + 1) * n as f64;
            for i in 0..n {
                acc += pow(qc, n - i) * pow(q, i + 1);
            }
            acc
        }
        _ => unreachable!(),
    })
}

/// A two-variable family member as a slice polynomial in `(q, conj(q))`,
/// built from its defining sum of star products.
pub fn family_poly(id: FamilyId, n: usize, p: Quaternion) -> Result<QQbarPoly> {
    let qm = QQbarPoly::q_minus(p);
    let qbm = QQbarPoly::qbar_minus(p);
    let nf = n as f64;
    Ok(match id {
        FamilyId::Ht => {
            // (1/(n+1)) sum_{k=1}^{n+1} (q-p)^{*(n+1-k)} * (qbar-p)^{*(k-1)}
            let mut acc = QQbarPoly::zero();
            for k in 1..=n + 1 {
                acc = acc.add(&qm.star_pow((n + 1 - k) as u32).star_mul(&qbm.star_pow((k - 1) as u32)));
            }
            acc.scale(1.0 / (nf + 1.0))
        }
        FamilyId::Qt => {
            // 2 sum_{j=0}^{n} ((n-j+1)/((n+1)(n+2))) (q-p)^{*(n-j)} * (qbar-p)^{*j}
            let mut acc = QQbarPoly::zero();
            for j in 0..=n {
                let w = nf - j as f64 + 1.0;
                acc = acc.add(&qm.star_pow((n - j) as u32).star_mul(&qbm.star_pow(j as u32)).scale(w));
            }
            acc.scale(2.0 / ((nf + 1.0) * (nf + 2.0)))
        }
        FamilyId::P2t => {
            // (q-p)^{*n} + Ht_n
            qm.star_pow(n as u32).add(&family_poly(FamilyId::Ht, n, p)?)
        }
        FamilyId::Hcal => {
            // sum_{k=1}^{n} (qbar-p)^{*(n-k)} * (q-p)^{*(k-1)}
            let mut acc = QQbarPoly::zero();
            for k in 1..=n {
                acc = acc.add(&qbm.star_pow((n - k) as u32).star_mul(&qm.star_pow((k - 1) as u32)));
            }
            acc
        }
        FamilyId::Mcal => {
            // sum_{j=0}^{n} (n-j) (qbar-p)^{*(n-j)} * (q-p)^{*j}
            let mut acc = QQbarPoly::zero();
            for j in 0..=n {
                acc = acc.add(&qbm.star_pow((n - j) as u32).star_mul(&qm.star_pow(j as u32)).scale(nf - j as f64));
            }
            acc
        }
        FamilyId::R2 => {
            // n (qbar-p)^{*(n+1)} + sum_{k=0}^{n-1} (qbar-p)^{*(n-k)} * (q-p)^{*(k+1)}
            let mut acc = qbm.star_pow(n as u32 + 1).scale(nf);
            for k in 0..n {
                acc = acc.add(&qbm.star_pow((n - k) as u32).star_mul(&qm.star_pow(k as u32 + 1)));
            }
            acc
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{id:?} is a one-variable family; use eval_family"
            )))
        }
    })
}

/// Closed form of a family member, valid for non-real `q`. Used as a
/// cross-check of the defining sums.
pub fn eval_family_closed(
    id: FamilyId,
    n: usize,
    p: Option<Quaternion>,
    q: Quaternion,
) -> Result<Quaternion> {
    let im = q.imag();
    if q.is_real() {
        return Err(Error::InvalidArgument(
            "closed family forms need a non-real q".into(),
        ));
    }
    let iminv = im.conj_mod_inv()?;
    let p = p.unwrap_or(Quaternion::ZERO);
    let sp = |k: i32| crate::star::star_power(p, k, q);
    let sbp = |k: i32| crate::star::star_power(p, k, q.conj()); // (qbar - p)^{*k}
    let nf = n as f64;
    Ok(match id {
        FamilyId::H => {
            // H_n = -iminv (qbar^{n+1} - q^{n+1}) / (2(n+1))
            let d = q.conj().powi(n as i32 + 1)? - q.powi(n as i32 + 1)?;
            iminv * d * (-1.0 / (2.0 * (nf + 1.0)))
        }
        FamilyId::CA => {
            // iminv/(2(n+1)(n+2)) [2(n+2) q^{n+1} + iminv (qbar^{n+2} - q^{n+2})]
            let inner = q.powi(n as i32 + 1)? * (2.0 * (nf + 2.0))
                + iminv * (q.conj().powi(n as i32 + 2)? - q.powi(n as i32 + 2)?);
            iminv * inner * (1.0 / (2.0 * (nf + 1.0) * (nf + 2.0)))
        }
        FamilyId::P2 => {
            q.powi(n as i32)? + eval_family_closed(FamilyId::H, n, None, q)?
        }
        FamilyId::Pneg => {
            // (iminv/2)(q^n - qbar^n)
            iminv * (q.powi(n as i32)? - q.conj().powi(n as i32)?) * 0.5
        }
        FamilyId::S => {
            // (iminv/4)[-2n qbar^{n+1} + iminv |q|^2 (q^n - qbar^n)]
            let inner = q.conj().powi(n as i32 + 1)? * (-2.0 * nf)
                + iminv * (q.powi(n as i32)? - q.conj().powi(n as i32)?) * q.norm_sqr();
            iminv * inner * 0.25
        }
        FamilyId::R => {
            // n qbar^{n+1} + (iminv |q|^2 / 2)(q^n - qbar^n)
            q.conj().powi(n as i32 + 1)? * nf
                + iminv * (q.powi(n as i32)? - q.conj().powi(n as i32)?) * (q.norm_sqr() / 2.0)
        }
        FamilyId::Ht => {
            // -(iminv/(2(n+1))) [(qbar-p)^{*(n+1)} - (q-p)^{*(n+1)}]
            iminv * (sbp(n as i32 + 1)? - sp(n as i32 + 1)?) * (-1.0 / (2.0 * (nf + 1.0)))
        }
        FamilyId::Qt => {
            // (iminv/(2(n+1)(n+2))) [2(n+2)(q-p)^{*(n+1)}
            //                         + iminv ((qbar-p)^{*(n+2)} - (q-p)^{*(n+2)})]
            let inner = sp(n as i32 + 1)? * (2.0 * (nf + 2.0))
                + iminv * (sbp(n as i32 + 2)? - sp(n as i32 + 2)?);
            iminv * inner * (1.0 / (2.0 * (nf + 1.0) * (nf + 2.0)))
        }
        FamilyId::P2t => {
            // (q-p)^{*n} - (iminv/(2(n+1))) [(qbar-p)^{*(n+1)} - (q-p)^{*(n+1)}]
            sp(n as i32)? + iminv * (sbp(n as i32 + 1)? - sp(n as i32 + 1)?) * (-1.0 / (2.0 * (nf + 1.0)))
        }
        FamilyId::Hcal => {
            // (iminv/2) [(q-p)^{*n} - (qbar-p)^{*n}]
            iminv * (sp(n as i32)? - sbp(n as i32)?) * 0.5
        }
        FamilyId::Mcal => {
            // (iminv/4) [-2n (qbar-p)^{*(n+1)} + iminv ((q-p)^{*n} - (qbar-p)^{*n}) Q_{c,p}(q)]
            let comp = crate::star::companion(p, q);
            let inner = sbp(n as i32 + 1)? * (-2.0 * nf)
                + iminv * (sp(n as i32)? - sbp(n as i32)?) * comp;
            iminv * inner * 0.25
        }
        FamilyId::R2 => {
            // n (qbar-p)^{*(n+1)} + (iminv/2) ((q-p)^{*n} - (qbar-p)^{*n}) Q_{c,p}(q)
            let comp = crate::star::companion(p, q);
            sbp(n as i32 + 1)? * nf + iminv * (sp(n as i32)? - sbp(n as i32)?) * comp * 0.5
        }
    })
}

/// Fueter variables `xi_i = q_i - e_i q_0`.
pub fn fueter_variables(q: Quaternion) -> [Quaternion; 3] {
    [
        Quaternion::real(q.q1) - Quaternion::E1 * q.q0,
        Quaternion::real(q.q2) - Quaternion::E2 * q.q0,
        Quaternion::real(q.q3) - Quaternion::E3 * q.q0,
    ]
}

/// Symmetrized Fueter polynomial for the multi-index `nu = [m1, m2, m3]`:
/// `(1/m!)` times the sum over all distinct orderings of the factors
/// `(q0 e_k - q_k)`, where `k = 1, 2, 3` appears `m_k` times and
/// `m = m1 + m2 + m3 <= 8`.
pub fn eval_fueter_polynomial(nu: [u32; 3], q: Quaternion) -> Result<Quaternion> {
    let m = nu[0] + nu[1] + nu[2];
    if m > 8 {
        return Err(Error::InvalidArgument(format!(
            "Fueter polynomial degree {m} exceeds the supported maximum 8"
        )));
    }
    let factors = [
        Quaternion::E1 * q.q0 - Quaternion::real(q.q1),
        Quaternion::E2 * q.q0 - Quaternion::real(q.q2),
        Quaternion::E3 * q.q0 - Quaternion::real(q.q3),
    ];
    let mut total = Quaternion::ZERO;
    let mut counts = nu;
    fn rec(
        counts: &mut [u32; 3],
        acc: Quaternion,
        factors: &[Quaternion; 3],
        total: &mut Quaternion,
    ) {
        if counts.iter().all(|&c| c == 0) {
            *total += acc;
            return;
        }
        for k in 0..3 {
            if counts[k] > 0 {
                counts[k] -= 1;
                rec(counts, acc * factors[k], factors, total);
                counts[k] += 1;
            }
        }
    }
    rec(&mut counts, Quaternion::ONE, &factors, &mut total);
    let mut mfact = 1.0;
    for i in 1..=m {
        mfact *= i as f64;
    }
    Ok(total / mfact)
}

/// A two-variable family member (or one-variable, at `p = 0`) packaged as a
/// slice function.
pub struct FamilyFn {
    poly: QQbarPoly,
}

impl FamilyFn {
    pub fn new(id: FamilyId, n: usize, p: Quaternion) -> Result<Self> {
        let id2 = match id {
            FamilyId::H => FamilyId::Ht,
            FamilyId::CA => FamilyId::Qt,
            FamilyId::P2 => FamilyId::P2t,
            FamilyId::Pneg => FamilyId::Hcal,
            FamilyId::S => FamilyId::Mcal,
            FamilyId::R => FamilyId::R2,
            other => other,
        };
        Ok(Self {
            poly: family_poly(id2, n, p)?,
        })
    }

    pub fn poly(&self) -> &QQbarPoly {
        &self.poly
    }
}

impl SliceFunction for FamilyFn {
    fn components(&self, u: f64, v: f64) -> (Quaternion, Quaternion) {
        self.poly.components(u, v)
    }
}
