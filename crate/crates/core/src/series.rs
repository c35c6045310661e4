//! The four series-expansion schemes and their fine-structure coefficient
//! transforms.
//!
//! A [`SeriesSpec`] holds coefficients for one of
//!
//! * `star_taylor`:        `sum_{n>=0} (q-p)^{*n} a_n`;
//! * `spherical`:          `sum_{n>=0} Q_p^n(q) [a_{2n} + (q-p) a_{2n+1}]`;
//! * `star_laurent`:       the two-sided star expansion;
//! * `spherical_laurent`:  the two-sided spherical expansion.
//!
//! Applying `D`, `Dbar` or `Delta` to a star expansion produces a series over
//! one of the polynomial families ([`fine_transform`]); applying them to a
//! spherical expansion is done termwise through the closed block actions
//! ([`eval_fine_spherical`]) or through re-expansion over the one-variable
//! families shifted to the real part of the center ([`rebased_eval`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::families::{eval_family, FamilyId};
use crate::operators::{apply_exact, global_power_on_block, ExactTarget, OperatorId};
use crate::quat::Quaternion;
use crate::regions::{radius_estimate, region_contains, RadiusSide, Region};
use crate::star::{companion, spherical_block, star_power};
use crate::Result;

/// Expansion kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    #[serde(rename = "star_taylor")]
    StarTaylor,
    #[serde(rename = "spherical")]
    Spherical,
    #[serde(rename = "star_laurent")]
    StarLaurent,
    #[serde(rename = "spherical_laurent")]
    SphericalLaurent,
}

impl SeriesKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "star_taylor" => SeriesKind::StarTaylor,
            "spherical" => SeriesKind::Spherical,
            "star_laurent" => SeriesKind::StarLaurent,
            "spherical_laurent" => SeriesKind::SphericalLaurent,
            _ => return Err(Error::Parse(format!("unknown series kind '{s}'"))),
        })
    }

    pub fn is_spherical(self) -> bool {
        matches!(self, SeriesKind::Spherical | SeriesKind::SphericalLaurent)
    }

    pub fn is_laurent(self) -> bool {
        matches!(self, SeriesKind::StarLaurent | SeriesKind::SphericalLaurent)
    }
}

fn default_truncation() -> usize {
    32
}

/// A truncated expansion. For spherical kinds the index `2n` carries the
/// coefficient of `Q_p^n(q)` and `2n+1` that of `Q_p^n(q)(q-p)`; for Laurent
/// kinds negative indices are allowed.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub center: Quaternion,
    #[serde(default)]
    pub coeffs: BTreeMap<i64, Quaternion>,
    #[serde(rename = "N", default = "default_truncation")]
    pub truncation: usize,
}

impl SeriesSpec {
    pub fn new(kind: SeriesKind, center: Quaternion) -> Self {
        Self {
            kind,
            center,
            coeffs: BTreeMap::new(),
            truncation: default_truncation(),
        }
    }

    pub fn with_coeff(mut self, n: i64, a: Quaternion) -> Self {
        self.coeffs.insert(n, a);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.kind.is_laurent() {
            if let Some((&n, _)) = self.coeffs.range(..0).next() {
                return Err(Error::InvalidArgument(format!(
                    "{:?} series cannot carry the negative index {n}",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    /// Indices actually summed: the stored ones clipped to the truncation.
    fn active_indices(&self) -> Vec<i64> {
        let n = self.truncation as i64;
        let lim = if self.kind.is_spherical() { 2 * n + 1 } else { n };
        self.coeffs
            .keys()
            .copied()
            .filter(|&k| k.abs() <= lim)
            .collect()
    }

    /// One term of the expansion.
    fn term(&self, n: i64, q: Quaternion) -> Result<Quaternion> {
        let p = self.center;
        let a = self.coeffs[&n];
        if self.kind.is_spherical() {
            let block = n.div_euclid(2) as i32;
            let b = spherical_block(p, block, q)?;
            Ok(if n.rem_euclid(2) == 1 {
                b * (q - p) * a
            } else {
                b * a
            })
        } else {
            Ok(star_power(p, n as i32, q)? * a)
        }
    }

    /// The convergence region suggested by the coefficient decay, when the
    /// window is long enough to estimate it.
    pub fn estimated_region(&self) -> Option<Region> {
        let p = self.center;
        let side = |taylor: bool| -> Option<f64> {
            let mut dense: Vec<Quaternion> = Vec::new();
            if self.kind.is_spherical() {
                // pair the block coefficients
                let top = self
                    .coeffs
                    .keys()
                    .map(|&k| if taylor { k } else { -k })
                    .max()
                    .unwrap_or(-1);
                if top < 0 {
                    return None;
                }
                for m in 0..=top.div_euclid(2) {
                    let sign = if taylor { 1 } else { -1 };
                    let a = self.coeffs.get(&(sign * 2 * m)).copied().unwrap_or(Quaternion::ZERO);
                    let b = self
                        .coeffs
                        .get(&(sign * (2 * m + 1)))
                        .copied()
                        .unwrap_or(Quaternion::ZERO);
                    dense.push(Quaternion::real(a.norm().max(b.norm())));
                }
            } else {
                let top = self
                    .coeffs
                    .keys()
                    .map(|&k| if taylor { k } else { -k })
                    .max()
                    .unwrap_or(-1);
                if top < 0 {
                    return None;
                }
                for m in 0..=top {
                    let k = if taylor { m } else { -m };
                    dense.push(self.coeffs.get(&k).copied().unwrap_or(Quaternion::ZERO));
                }
            }
            let kind = if taylor { RadiusSide::Taylor } else { RadiusSide::LaurentInner };
            radius_estimate(&dense, kind).ok()
        };
        let outer = side(true);
        let inner = if self.kind.is_laurent() { side(false) } else { None };
        // spherical radii live in the Cassini metric, which squares distances
        let fix = |r: f64| if self.kind.is_spherical() { r.sqrt() } else { r };
        match (outer, inner) {
            (Some(r2), Some(r1)) if r1 > 0.0 => Some(if self.kind.is_spherical() {
                Region::CassiniShell { p, r1: fix(r1), r2: fix(r2) }
            } else {
                Region::StarShell { p, r1: fix(r1), r2: fix(r2) }
            }),
            (Some(r), _) if r.is_finite() => Some(if self.kind.is_spherical() {
                Region::CassiniBall { p, r: fix(r) }
            } else {
                Region::StarDome { p, r: fix(r) }
            }),
            _ => None,
        }
    }
}

/// Result of a series evaluation.
#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: Quaternion,
    /// Geometric tail estimate from the trailing term ratios.
    pub tail: f64,
    /// False when the coefficient-decay estimate places `q` outside the
    /// convergence region (the value is still returned).
    pub in_region: bool,
}

/// Evaluate the truncated expansion at `q`, in ascending index order with
/// compensated summation.
pub fn eval_series(spec: &SeriesSpec, q: Quaternion) -> Result<SeriesValue> {
    spec.validate()?;
    let mut sum = Quaternion::ZERO;
    let mut comp = Quaternion::ZERO;
    // magnitudes of the extreme terms on each side for the tail estimate
    let mut pos_last: Vec<f64> = Vec::new();
    let mut neg_last: Vec<f64> = Vec::new();
    for n in spec.active_indices() {
        let t = spec.term(n, q)?;
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if n >= 0 {
            pos_last.push(t.norm());
        } else {
            neg_last.push(t.norm());
        }
    }
    neg_last.reverse(); // most negative index last
    let side_tail = |mags: &[f64]| -> f64 {
        match mags {
            [] => 0.0,
            [.., a, b] if *a > 0.0 && b / a < 1.0 => b / a / (1.0 - b / a) * b,
            [.., b] => *b,
        }
    };
    let in_region = spec
        .estimated_region()
        .map(|r| region_contains(r, q))
        .unwrap_or(true);
    Ok(SeriesValue {
        value: sum,
        tail: side_tail(&pos_last) + side_tail(&neg_last),
        in_region,
    })
}

/// The image of a star expansion under `D`, `Dbar` or `Delta`: a series over
/// a two-variable polynomial family (nonnegative part) plus, for Laurent
/// sources, a family-times-companion-power part (negative indices).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FineSeries {
    pub op: OperatorId,
    pub center: Quaternion,
    /// Family of the nonnegative part and its coefficients.
    pub pos_basis: FamilyId,
    pub pos_coeffs: BTreeMap<usize, Quaternion>,
    /// Family of the negative part (`n >= 1`) and its coefficients; term `n`
    /// reads `family_n(q, p) * Q_{c,p}^{-(n + companion_offset)} * c_n`.
    pub neg_basis: Option<FamilyId>,
    pub neg_coeffs: BTreeMap<usize, Quaternion>,
    pub companion_offset: u32,
}

/// Transform the coefficients of a star expansion under an operator:
///
/// * `D`:     `b_n = -2 (n+1) a_{n+1}` over the `Ht` family,
///   and `b_{-n} = 2 a_{-n}` over `Hcal_n Q_{c,p}^{-n}`;
/// * `Delta`: `b_n = -2 (n+2)(n+1) a_{n+2}` over `Qt`,
///   and `c_{-n} = -4 a_{-n}` over `Mcal_n Q_{c,p}^{-n-1}`;
/// * `Dbar`:  `b_n = 2 (n+1) a_{n+1}` over `P2t`,
///   and `c_{-n} = -2 a_{-n}` over `R2_n Q_{c,p}^{-n-1}`.
///
/// Spherical sources are handled by [`eval_fine_spherical`] instead.
pub fn fine_transform(spec: &SeriesSpec, op: OperatorId) -> Result<FineSeries> {
    spec.validate()?;
    if spec.kind.is_spherical() {
        return Err(Error::InvalidArgument(
            "spherical expansions transform termwise; use eval_fine_spherical".into(),
        ));
    }
    let (pos_basis, neg_basis, companion_offset) = match op {
        OperatorId::D => (FamilyId::Ht, FamilyId::Hcal, 0),
        OperatorId::Delta => (FamilyId::Qt, FamilyId::Mcal, 1),
        OperatorId::Dbar => (FamilyId::P2t, FamilyId::R2, 1),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no fine transform for {other:?}"
            )))
        }
    };
    let mut pos = BTreeMap::new();
    let mut neg = BTreeMap::new();
    for (&k, &a) in &spec.coeffs {
        if k >= 0 {
            let n = k as usize;
            match op {
                OperatorId::D if n >= 1 => {
                    pos.insert(n - 1, a * (-2.0 * n as f64));
                }
                OperatorId::Delta if n >= 2 => {
                    pos.insert(n - 2, a * (-2.0 * n as f64 * (n as f64 - 1.0)));
                }
                OperatorId::Dbar if n >= 1 => {
                    pos.insert(n - 1, a * (2.0 * n as f64));
                }
                _ => {}
            }
        } else {
            let n = (-k) as usize;
            let c = match op {
                OperatorId::D => 2.0,
                OperatorId::Delta => -4.0,
                _ => -2.0,
            };
            neg.insert(n, a * c);
        }
    }
    Ok(FineSeries {
        op,
        center: spec.center,
        pos_basis,
        pos_coeffs: pos,
        neg_basis: if neg.is_empty() { None } else { Some(neg_basis) },
        neg_coeffs: neg,
        companion_offset,
    })
}

/// Evaluate a [`FineSeries`] at `q`.
pub fn eval_fine_series(fs: &FineSeries, q: Quaternion) -> Result<Quaternion> {
    let p = fs.center;
    let mut sum = Quaternion::ZERO;
    for (&n, &b) in &fs.pos_coeffs {
        sum += eval_family(fs.pos_basis, n, Some(p), q)? * b;
    }
    if let Some(basis) = fs.neg_basis {
        let scale = (1.0 + q.norm() + p.norm()).powi(2);
        let c = companion(p, q);
        if c.norm() <= crate::tol::SPHERE_DIVISOR_REL * scale {
            return Err(Error::SphericalSingularity { magnitude: c.norm() });
        }
        for (&n, &cn) in &fs.neg_coeffs {
            let e = -(n as i32 + fs.companion_offset as i32);
            sum += eval_family(basis, n, Some(p), q)? * c.powi(e)? * cn;
        }
    }
    Ok(sum)
}

/// Closed evaluation (non-real `q`) of the operator applied to a star
/// expansion, using only star powers at `q`, at the slice-conjugate point,
/// and the termwise slice derivative:
///
/// * `D f     = imag(q)^{-1} sum [(conj(q)-p)^{*n} - (q-p)^{*n}] a_n`;
/// * `Delta f = -2 imag(q)^{-1} d_q0 f - imag(q)^{-2} sum [...] a_n`;
/// * `Dbar f  = 2 d_q0 f - imag(q)^{-1} sum [...] a_n`.
pub fn closed_fine_eval(spec: &SeriesSpec, op: OperatorId, q: Quaternion) -> Result<Quaternion> {
    spec.validate()?;
    if spec.kind.is_spherical() {
        return Err(Error::InvalidArgument(
            "closed fine forms apply to star expansions".into(),
        ));
    }
    if q.is_real() {
        return Err(Error::UndefinedAxis(
            "closed fine forms need a non-real point".into(),
        ));
    }
    let p = spec.center;
    let iminv = q.imag().conj_mod_inv()?;
    let mut diff = Quaternion::ZERO;
    let mut ds = Quaternion::ZERO;
    for n in spec.active_indices() {
        let a = spec.coeffs[&n];
        diff += (star_power(p, n as i32, q.conj())? - star_power(p, n as i32, q)?) * a;
        if n != 0 {
            ds += star_power(p, n as i32 - 1, q)? * (n as f64) * a;
        }
    }
    Ok(match op {
        OperatorId::D => iminv * diff,
        OperatorId::Delta => iminv * ds * -2.0 - iminv * iminv * diff,
        OperatorId::Dbar => ds * 2.0 - iminv * diff,
        other => {
            return Err(Error::InvalidArgument(format!(
                "no closed fine form for {other:?}"
            )))
        }
    })
}

/// Apply the operator to a spherical expansion termwise through the closed
/// block actions.
pub fn eval_fine_spherical(
    spec: &SeriesSpec,
    op: OperatorId,
    q: Quaternion,
) -> Result<Quaternion> {
    spec.validate()?;
    if !spec.kind.is_spherical() {
        return Err(Error::InvalidArgument(
            "termwise block actions apply to spherical expansions".into(),
        ));
    }
    let p = spec.center;
    let mut sum = Quaternion::ZERO;
    for n in spec.active_indices() {
        let a = spec.coeffs[&n];
        let target = ExactTarget::Block {
            p,
            n: n.div_euclid(2) as i32,
            linear_factor: n.rem_euclid(2) == 1,
        };
        sum += apply_exact(op, target, q)? * a;
    }
    Ok(sum)
}

/// Evaluate the operator applied to a spherical (Taylor) expansion through
/// the re-expansion over the one-variable families shifted to the real part
/// `p0` of the center: each block is opened with the binomial theorem,
/// `Q_p^n = sum_k C(n,k) (q-p0)^{2k} p1^{2(n-k)}`, and the one-variable
/// actions `D (q-p0)^m = -2m H_{m-1}(q-p0)`,
/// `Delta (q-p0)^m = -2m(m-1) CA_{m-2}(q-p0)`,
/// `Dbar (q-p0)^m = 2m P2_{m-1}(q-p0)` are applied termwise
/// (`(q-p) = (q-p0) - p1 I` with `I` the axis of the center).
pub fn rebased_eval(spec: &SeriesSpec, op: OperatorId, q: Quaternion) -> Result<Quaternion> {
    spec.validate()?;
    if spec.kind != SeriesKind::Spherical {
        return Err(Error::InvalidArgument(
            "re-expansion applies to spherical Taylor expansions".into(),
        ));
    }
    let (p0, p1, axis) = spec.center.slice_coords();
    let i = axis.map(|a| a.as_quat()).unwrap_or(Quaternion::ZERO);
    let s = q - Quaternion::real(p0);

    // one-variable action on (q - p0)^m
    let act = |m: u32| -> Result<Quaternion> {
        let mf = m as f64;
        Ok(match op {
            OperatorId::D => {
                if m == 0 {
                    Quaternion::ZERO
                } else {
                    eval_family(FamilyId::H, m as usize - 1, None, s)? * (-2.0 * mf)
                }
            }
            OperatorId::Delta => {
                if m < 2 {
                    Quaternion::ZERO
                } else {
                    eval_family(FamilyId::CA, m as usize - 2, None, s)?
                        * (-2.0 * mf * (mf - 1.0))
                }
            }
            OperatorId::Dbar => {
                if m == 0 {
                    Quaternion::ZERO
                } else {
                    eval_family(FamilyId::P2, m as usize - 1, None, s)? * (2.0 * mf)
                }
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "no re-expansion for {other:?}"
                )))
            }
        })
    };

    let mut sum = Quaternion::ZERO;
    for idx in spec.active_indices() {
        let a = spec.coeffs[&idx];
        let n = idx.div_euclid(2) as u32;
        let linear = idx.rem_euclid(2) == 1;
        let mut term = Quaternion::ZERO;
        for k in 0..=n {
            let w = crate::binomial(n, k) * p1.powi(2 * (n - k) as i32);
            if linear {
                // (q-p0)^{2k} (q - p) = (q-p0)^{2k+1} - (q-p0)^{2k} p1 I
                term += act(2 * k + 1)? * w - act(2 * k)? * (w * p1) * i;
            } else {
                term += act(2 * k)? * w;
            }
        }
        sum += term * a;
    }
    Ok(sum)
}

/// Both sides of the Taylor <-> spherical coefficient relation for a
/// spherical coefficient vector `a` (index `2n` / `2n+1` as in
/// [`SeriesSpec`]), truncated at star degree `n_max`:
///
/// * left:  `sum_n (q-p)^{*n} b_n` with `b_0 = a_0`,
///   `b_n = c_n a_{2n} + c_{n-1} a_{2n-1}` and `c_n = (-2)^n n!`;
/// * right: `sum_n V_p^n (Q_p^n) a_{2n} + sum_n V_p^n (Q_p^n (q-p)) a_{2n+1}`
///   through the closed global-operator powers.
///
/// Requires a non-real center.
pub fn taylor_spherical_relation(
    a: &[Quaternion],
    p: Quaternion,
    q: Quaternion,
    n_max: usize,
) -> Result<(Quaternion, Quaternion)> {
    if p.is_real() {
        return Err(Error::UndefinedAxis(
            "the global-operator path needs a non-real center".into(),
        ));
    }
    let coeff = |k: usize| a.get(k).copied().unwrap_or(Quaternion::ZERO);
    let c = |n: i64| -> f64 {
        let mut v = 1.0;
        for j in 1..=n {
            v *= -2.0 * j as f64;
        }
        v
    };
    let mut lhs = Quaternion::ZERO;
    let mut rhs = Quaternion::ZERO;
    // the linear term of block n_max reaches star degree n_max + 1, so the
    // star side runs one degree further
    for n in 0..=n_max + 1 {
        let b = if n == 0 {
            coeff(0)
        } else {
            coeff(2 * n) * c(n as i64) + coeff(2 * n - 1) * c(n as i64 - 1)
        };
        lhs += star_power(p, n as i32, q)? * b;
        if n <= n_max {
            rhs += global_power_on_block(n as u32, n as u32, p, q, false)? * coeff(2 * n)
                + global_power_on_block(n as u32, n as u32, p, q, true)? * coeff(2 * n + 1);
        }
    }
    Ok((lhs, rhs))
}
