//! Convergence-region geometry: the distance σ, the pseudo-distance τ, the
//! Cassini pseudo-distance δ, and membership predicates for the convergence
//! sets of the four series kinds.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::Result;

/// Distance kinds between quaternions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceKind {
    /// `|q - p|` on a common plane, else `sqrt((q0-p0)^2 + (|q'| + |p'|)^2)`.
    Sigma,
    /// `|q - p|` on a common plane, else `sqrt((q0-p0)^2 + (|q'| - |p'|)^2)`.
    Tau,
    /// `sqrt(|(q - p0)^2 + p1^2|)`, vanishing on the whole sphere of `p`.
    Cassini,
}

impl DistanceKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "sigma" => DistanceKind::Sigma,
            "tau" => DistanceKind::Tau,
            "cassini" => DistanceKind::Cassini,
            _ => return Err(Error::Parse(format!("unknown distance kind '{s}'"))),
        })
    }
}

fn same_plane(q: Quaternion, p: Quaternion) -> bool {
    let (_, _, iq) = q.slice_coords();
    let (_, _, ip) = p.slice_coords();
    match (iq, ip) {
        (Some(a), Some(b)) => a.same_plane(b),
        _ => true, // either point real: it lies on every plane
    }
}

/// Evaluate σ, τ or δ.
pub fn distance(kind: DistanceKind, q: Quaternion, p: Quaternion) -> f64 {
    match kind {
        DistanceKind::Sigma | DistanceKind::Tau => {
            if same_plane(q, p) {
                q.dist(p)
            } else {
                let d0 = q.q0 - p.q0;
                let dv = if kind == DistanceKind::Sigma {
                    q.imag_norm() + p.imag_norm()
                } else {
                    q.imag_norm() - p.imag_norm()
                };
                (d0 * d0 + dv * dv).sqrt()
            }
        }
        DistanceKind::Cassini => {
            let (p0, p1, _) = p.slice_coords();
            let c = (q - Quaternion::real(p0)).powi(2).unwrap() + Quaternion::real(p1 * p1);
            c.norm().sqrt()
        }
    }
}

/// Axially symmetric convergence regions. Shells are open annular sets; all
/// memberships are strict.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "tag")]
pub enum Region {
    /// σ-ball `{ q : sigma(q, p) < R }`.
    #[serde(rename = "sigma_ball")]
    SigmaBall { p: Quaternion, #[serde(rename = "R")] r: f64 },
    /// Both plane representatives `u ± I v` lie in the disc of radius `r`
    /// around `(p0, p1)` in the plane of `p`.
    #[serde(rename = "star_dome")]
    StarDome { p: Quaternion, r: f64 },
    /// Both plane representatives lie in the annulus `R1 < |z - (p0,p1)| < R2`.
    #[serde(rename = "star_shell")]
    StarShell {
        p: Quaternion,
        #[serde(rename = "R1")]
        r1: f64,
        #[serde(rename = "R2")]
        r2: f64,
    },
    /// Cassini ball `{ q : |(q-p0)^2 + p1^2| < R^2 }`.
    #[serde(rename = "cassini_ball")]
    CassiniBall { p: Quaternion, #[serde(rename = "R")] r: f64 },
    /// Cassini shell `{ q : r1^2 < |(q-p0)^2 + p1^2| < r2^2 }`.
    #[serde(rename = "cassini_shell")]
    CassiniShell { p: Quaternion, r1: f64, r2: f64 },
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Region::SigmaBall { r, .. } | Region::StarDome { r, .. } | Region::CassiniBall { r, .. } => r > 0.0,
            Region::StarShell { r1, r2, .. } => r1 >= 0.0 && r1 < r2,
            Region::CassiniShell { r1, r2, .. } => r1 >= 0.0 && r1 < r2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("degenerate region {self:?}")))
        }
    }

    pub fn center(&self) -> Quaternion {
        match *self {
            Region::SigmaBall { p, .. }
            | Region::StarDome { p, .. }
            | Region::StarShell { p, .. }
            | Region::CassiniBall { p, .. }
            | Region::CassiniShell { p, .. } => p,
        }
    }
}

/// Strict membership test for `q` in the region.
pub fn region_contains(region: Region, q: Quaternion) -> bool {
    // distances of the two plane representatives u ± I v of q from the center
    // (p0, p1) viewed in the center's plane
    let rep_dists = |p: Quaternion| -> (f64, f64) {
        let (p0, p1, _) = p.slice_coords();
        let (u, v, _) = q.slice_coords();
        let du = u - p0;
        let plus = (du * du + (v - p1) * (v - p1)).sqrt();
        let minus = (du * du + (v + p1) * (v + p1)).sqrt();
        (plus, minus)
    };
    match region {
        Region::SigmaBall { p, r } => distance(DistanceKind::Sigma, q, p) < r,
        Region::StarDome { p, r } => {
            let (a, b) = rep_dists(p);
            a < r && b < r
        }
        Region::StarShell { p, r1, r2 } => {
            let (a, b) = rep_dists(p);
            r1 < a && a < r2 && r1 < b && b < r2
        }
        Region::CassiniBall { p, r } => distance(DistanceKind::Cassini, q, p) < r,
        Region::CassiniShell { p, r1, r2 } => {
            let d = distance(DistanceKind::Cassini, q, p);
            r1 < d && d < r2
        }
    }
}

/// Which side of a Laurent expansion a coefficient window describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusSide {
    /// Nonnegative-index coefficients: returns the convergence radius
    /// `1 / limsup |a_n|^{1/n}`.
    Taylor,
    /// Negative-index coefficients: returns the inner radius
    /// `limsup |a_{-n}|^{1/n}`.
    LaurentInner,
}

/// Estimate a convergence radius from a coefficient window (`coeffs[n]` is
/// the modulus-relevant coefficient of index `n`, `n >= 0`).
///
/// `limsup |a_n|^{1/n}` is estimated as the maximum of `|a_n|^{1/n}` over the
/// tail half of the window; this is an estimator, not an exact limsup.
/// Requires at least 8 coefficients. Radii beyond `1e12` are reported as
/// infinite.
pub fn radius_estimate(coeffs: &[Quaternion], side: RadiusSide) -> Result<f64> {
    if coeffs.len() < 8 {
        return Err(Error::InvalidArgument(format!(
            "radius estimation needs at least 8 coefficients, got {}",
            coeffs.len()
        )));
    }
    let n = coeffs.len();
    let mut est: f64 = 0.0;
    for (k, c) in coeffs.iter().enumerate().skip(n / 2) {
        if k == 0 {
            continue;
        }
        est = est.max(c.norm().powf(1.0 / k as f64));
    }
    Ok(match side {
        RadiusSide::Taylor => {
            if est == 0.0 {
                f64::INFINITY
            } else {
                let r = 1.0 / est;
                if r > 1e12 {
                    f64::INFINITY
                } else {
                    r
                }
            }
        }
        RadiusSide::LaurentInner => est,
    })
}

/// Membership grid over a rectangle in the plane of `axis`:
/// rows of `(u, v, inside)`.
pub fn sample_grid(
    region: Region,
    axis: ImaginaryUnit,
    u_range: (f64, f64),
    v_range: (f64, f64),
    steps: usize,
) -> Vec<(f64, f64, bool)> {
    let steps = steps.max(2);
    let mut rows = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        let u = u_range.0 + (u_range.1 - u_range.0) * i as f64 / (steps - 1) as f64;
        for j in 0..steps {
            let v = v_range.0 + (v_range.1 - v_range.0) * j as f64 / (steps - 1) as f64;
            let q = Quaternion::real(u) + axis.as_quat() * v;
            rows.push((u, v, region_contains(region, q)));
        }
    }
    rows
}
