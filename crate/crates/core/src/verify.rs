//! Named invariant groups for the `verify` subcommand: each group re-checks a
//! cluster of identities at randomly sampled points and reports the largest
//! residual seen, so a regression anywhere in the numeric core surfaces as a
//! failed group rather than a silent drift.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::contour::{cauchy_eval, fine_integral, slice_independence_check, Contour};
use crate::error::Error;
use crate::families::{eval_family, FamilyFn, FamilyId};
use crate::kernels::{eval_kernel, kernel_connection, kernel_series, kernel_splitting, KernelId};
use crate::operators::{apply_exact, apply_numeric, rep_formula, ExactTarget, OperatorId};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::regions::{distance, region_contains, DistanceKind, Region};
use crate::series::{eval_fine_series, eval_series, fine_transform, taylor_spherical_relation, SeriesKind, SeriesSpec};
use crate::slicefn::{MonomialSum, PointwiseSlice, SliceFunction};
use crate::star::{companion, star_power, QQbarPoly, StarProduct};
use crate::Result;

/// One verified identity: the largest relative residual observed and the
/// tolerance it must stay under.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tol
    }
}

/// The outcome of one invariant group.
#[derive(Clone, Debug)]
pub struct GroupReport {
    pub group: String,
    pub checks: Vec<Check>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Every invariant group, in the order `--all` runs them.
pub const GROUP_NAMES: [&str; 9] = [
    "star-calculus",
    "families",
    "operators",
    "fueter-theorem",
    "kernels",
    "transforms",
    "regions",
    "integrals",
    "discrepancies",
];

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn record(&mut self, name: &str, residual: f64, tol: f64) {
        match self.checks.iter_mut().find(|c| c.name == name) {
            Some(c) => c.residual = c.residual.max(residual),
            None => self.checks.push(Check { name: name.into(), residual, tol }),
        }
    }
}

fn rand_quat(rng: &mut ChaCha8Rng, half_width: f64) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-half_width..half_width),
        rng.gen_range(-half_width..half_width),
        rng.gen_range(-half_width..half_width),
        rng.gen_range(-half_width..half_width),
    )
}

fn rel(a: Quaternion, b: Quaternion) -> f64 {
    a.dist(b) / (1.0 + a.norm().max(b.norm()))
}

/// Run one named group; the same seed reproduces the same samples.
pub fn run_group(name: &str, seed: u64) -> Result<GroupReport> {
    let idx = GROUP_NAMES
        .iter()
        .position(|&g| g == name)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown group '{name}' (expected one of {})",
                GROUP_NAMES.join(", ")
            ))
        })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(idx as u64));
    let mut rec = Recorder::new();
    match name {
        "star-calculus" => star_calculus(&mut rng, &mut rec)?,
        "families" => families(&mut rng, &mut rec)?,
        "operators" => operators(&mut rng, &mut rec)?,
        "fueter-theorem" => fueter_theorem(&mut rng, &mut rec)?,
        "kernels" => kernels(&mut rng, &mut rec)?,
        "transforms" => transforms(&mut rng, &mut rec)?,
        "regions" => regions(&mut rng, &mut rec)?,
        "integrals" => integrals(&mut rng, &mut rec)?,
        "discrepancies" => discrepancies(&mut rng, &mut rec)?,
        _ => unreachable!(),
    }
    Ok(GroupReport { group: name.into(), checks: rec.checks })
}

/// Run every group, optionally across `threads` worker threads; the report
/// order always matches [`GROUP_NAMES`].
pub fn run_all(seed: u64, threads: usize) -> Result<Vec<GroupReport>> {
    let threads = threads.clamp(1, GROUP_NAMES.len());
    let results: Mutex<Vec<Option<Result<GroupReport>>>> =
        Mutex::new((0..GROUP_NAMES.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= GROUP_NAMES.len() {
                    break;
                }
                let report = run_group(GROUP_NAMES[i], seed);
                results.lock().unwrap()[i] = Some(report);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("worker completed every slot"))
        .collect()
}

fn star_calculus(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for _ in 0..50 {
        let p = rand_quat(rng, 1.0);
        let q = rand_quat(rng, 1.0);
        // binomial star power vs the iterated star product
        for n in 0..=8u32 {
            let direct = star_power(p, n as i32, q)?;
            let iter = QQbarPoly::q_minus(p).star_pow(n).eval(q);
            rec.record("star-power binomial vs iterated product", rel(direct, iter), 1e-10);
        }
        // Q_{c,p}^n = (q-p)^{*n} * (qbar-p)^{*n}
        for n in 0..=6u32 {
            let lhs = companion(p, q).powi(n as i32)?;
            let rhs = QQbarPoly::q_minus(p)
                .star_pow(n)
                .star_mul(&QQbarPoly::qbar_minus(p).star_pow(n))
                .eval(q);
            rec.record("companion power as star product", rel(lhs, rhs), 1e-9);
        }
    }
    // (q-p)^{-*n} * (q-p)^{*n} = 1 away from the sphere of p
    for _ in 0..20 {
        let p = rand_quat(rng, 1.0);
        let mut q = rand_quat(rng, 1.0);
        while companion(p, q).norm() < 0.3 {
            q = rand_quat(rng, 1.0);
        }
        for n in 1..=4 {
            let neg = ExactTarget::StarPower { p, n: -n }.as_fn();
            let pos = ExactTarget::StarPower { p, n }.as_fn();
            let prod = StarProduct::new(neg, pos).eval(q);
            rec.record("negative star power inverts", rel(prod, Quaternion::ONE), 1e-8);
        }
    }
    Ok(())
}

fn families(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for _ in 0..300 {
        let q = rand_quat(rng, 2.0);
        for n in 0..=10usize {
            let bound = q.norm().powi(n as i32) * (1.0 + 1e-12);
            let h = eval_family(FamilyId::H, n, None, q)?;
            let ca = eval_family(FamilyId::CA, n, None, q)?;
            rec.record("harmonic polynomial norm bound", (h.norm() - bound).max(0.0), 0.0);
            rec.record("Appell polynomial norm bound", (ca.norm() - bound).max(0.0), 0.0);
        }
    }
    for _ in 0..20 {
        let q = rand_quat(rng, 1.0);
        let p = rand_quat(rng, 1.0);
        for n in 1..=8usize {
            let nf = n as f64;
            // P2_n = (n+2) CA_n - n q0 CA_{n-1}
            let lhs = eval_family(FamilyId::P2, n, None, q)?;
            let rhs = eval_family(FamilyId::CA, n, None, q)? * (nf + 2.0)
                - eval_family(FamilyId::CA, n - 1, None, q)? * (q.q0 * nf);
            rec.record("polyanalytic decomposition (one variable)", rel(lhs, rhs), 1e-9);

            // P2t_n = (n+2) Qt_n + n Qt_{n-1} p - n q0 Qt_{n-1}
            let lhs = eval_family(FamilyId::P2t, n, Some(p), q)?;
            let qt1 = eval_family(FamilyId::Qt, n - 1, Some(p), q)?;
            let rhs = eval_family(FamilyId::Qt, n, Some(p), q)? * (nf + 2.0) + qt1 * p * nf
                - qt1 * (q.q0 * nf);
            rec.record("polyanalytic decomposition (two variable)", rel(lhs, rhs), 1e-9);

            // R2_n = n (qbar-p)^{*(n+1)} + Hcal_n Q_{c,p}
            let lhs = eval_family(FamilyId::R2, n, Some(p), q)?;
            let rhs = star_power(p, n as i32 + 1, q.conj())? * nf
                + eval_family(FamilyId::Hcal, n, Some(p), q)? * companion(p, q);
            rec.record("polyanalytic decomposition (negative side)", rel(lhs, rhs), 1e-9);
        }
    }
    // Appell property: the slice derivative lowers the index
    for _ in 0..10 {
        let q = rand_quat(rng, 1.0);
        for n in 1..=6usize {
            let f = FamilyFn::new(FamilyId::CA, n, Quaternion::ZERO)?;
            let lhs = apply_numeric(OperatorId::Dbar, &f, q, None)? * 0.5;
            let rhs = eval_family(FamilyId::CA, n - 1, None, q)? * n as f64;
            rec.record("Appell lowering for the regular family", rel(lhs, rhs), 1e-6);
            let f = FamilyFn::new(FamilyId::H, n, Quaternion::ZERO)?;
            let lhs = apply_numeric(OperatorId::Dq0, &f, q, None)?;
            let rhs = eval_family(FamilyId::H, n - 1, None, q)? * n as f64;
            rec.record("Appell lowering for the harmonic family", rel(lhs, rhs), 1e-6);
        }
    }
    Ok(())
}

fn operators(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let ops = [OperatorId::D, OperatorId::Dbar, OperatorId::Delta, OperatorId::Dq0];
    for _ in 0..10 {
        let p = rand_quat(rng, 1.0);
        let mut q = rand_quat(rng, 1.0);
        while companion(p, q).norm() < 0.4 || q.imag().norm() < 0.1 {
            q = rand_quat(rng, 1.0);
        }
        let mut targets = Vec::new();
        for n in -2..=4i32 {
            targets.push(ExactTarget::StarPower { p, n });
        }
        for n in -2..=2i32 {
            for linear_factor in [false, true] {
                targets.push(ExactTarget::Block { p, n, linear_factor });
            }
        }
        for t in targets {
            for op in ops {
                let exact = apply_exact(op, t, q)?;
                let numeric = apply_numeric(op, &t.as_fn(), q, None)?;
                rec.record("closed operator actions vs finite differences", rel(exact, numeric), 1e-5);
            }
        }
    }
    Ok(())
}

fn fueter_theorem(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for _ in 0..20 {
        let coeffs: Vec<Quaternion> = (0..=6).map(|_| rand_quat(rng, 1.0)).collect();
        let f = MonomialSum::new(coeffs);
        let mut q = rand_quat(rng, 1.0);
        while q.imag().norm() < 0.2 {
            q = rand_quat(rng, 1.0);
        }
        let lap = rep_formula(OperatorId::Delta, &f, q, None)?;
        let scale = 1.0 + lap.norm();

        // Delta = D(Dbar f) = Dbar(D f), inner factor exact, outer numeric
        let dbar_f = PointwiseSlice::new(|x| {
            rep_formula(OperatorId::Dbar, &f, x, None).unwrap_or(Quaternion::ZERO)
        });
        let d_f = PointwiseSlice::new(|x| {
            rep_formula(OperatorId::D, &f, x, None).unwrap_or(Quaternion::ZERO)
        });
        let a = apply_numeric(OperatorId::D, &dbar_f, q, None)?;
        let b = apply_numeric(OperatorId::Dbar, &d_f, q, None)?;
        rec.record("Laplacian factors through D after Dbar", a.dist(lap) / scale, 1e-5);
        rec.record("Laplacian factors through Dbar after D", b.dist(lap) / scale, 1e-5);

        // D(Delta f) = 0: Delta f is Fueter regular
        let lap_f = PointwiseSlice::new(|x| {
            rep_formula(OperatorId::Delta, &f, x, None).unwrap_or(Quaternion::ZERO)
        });
        let r = apply_numeric(OperatorId::D, &lap_f, q, None)?;
        rec.record("image of the Laplacian is Fueter regular", r.norm() / scale, 1e-4);
    }
    Ok(())
}

fn kernels(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for _ in 0..30 {
        let p = rand_quat(rng, 1.5);
        let mut q = rand_quat(rng, 1.5);
        while companion(q, p).norm() < 0.4 || q.imag().norm() < 0.1 {
            q = rand_quat(rng, 1.5);
        }
        let sl = eval_kernel(KernelId::SLInvI, p, q)?;
        rec.record(
            "left Cauchy kernel forms agree",
            rel(sl, eval_kernel(KernelId::SLInvII, p, q)?),
            1e-11,
        );
        rec.record(
            "right Cauchy kernel forms agree",
            rel(
                eval_kernel(KernelId::SRInvI, p, q)?,
                eval_kernel(KernelId::SRInvII, p, q)?,
            ),
            1e-11,
        );

        // derived kernels are the fine operators applied to S_L^{-1} in q
        let slfn = PointwiseSlice::new(|x| eval_kernel(KernelId::SLInvI, p, x).unwrap_or(Quaternion::ZERO));
        let d = apply_numeric(OperatorId::D, &slfn, q, None)?;
        rec.record(
            "harmonic kernel from D of the Cauchy kernel",
            rel(d, eval_kernel(KernelId::QcInv(1), p, q)? * -2.0),
            1e-6,
        );
        let db = apply_numeric(OperatorId::Dbar, &slfn, q, None)?;
        rec.record(
            "polyanalytic kernel from Dbar of the Cauchy kernel",
            rel(db, eval_kernel(KernelId::P2L, p, q)?),
            1e-5,
        );
        let lap = apply_numeric(OperatorId::Delta, &slfn, q, None)?;
        rec.record(
            "regular kernel from Delta of the Cauchy kernel",
            rel(lap, eval_kernel(KernelId::FL, p, q)?),
            1e-5,
        );

        // the three splitting identities and the left-right connection
        for id in [KernelId::QcInv(1), KernelId::P2L, KernelId::FL] {
            let split = kernel_splitting(id, p, q)?;
            rec.record("kernel splitting identities", rel(split, eval_kernel(id, p, q)?), 1e-9);
        }
        rec.record(
            "harmonic kernel from the regular kernel",
            rel(kernel_connection(p, q)?, eval_kernel(KernelId::QcInv(1), p, q)?),
            1e-9,
        );
    }
    Ok(())
}

fn transforms(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for _ in 0..10 {
        let p = rand_quat(rng, 0.6);
        let mut spec = SeriesSpec::new(SeriesKind::StarLaurent, p);
        for n in -3..=5i64 {
            spec = spec.with_coeff(n, rand_quat(rng, 1.0));
        }
        for _ in 0..5 {
            let mut q = rand_quat(rng, 1.2);
            while companion(p, q).norm() < 0.5 || q.imag().norm() < 0.1 {
                q = rand_quat(rng, 1.2);
            }
            let as_fn =
                PointwiseSlice::new(|x| eval_series(&spec, x).map(|v| v.value).unwrap_or(Quaternion::ZERO));
            for op in [OperatorId::D, OperatorId::Dbar, OperatorId::Delta] {
                let fine = eval_fine_series(&fine_transform(&spec, op)?, q)?;
                let numeric = apply_numeric(op, &as_fn, q, None)?;
                rec.record("fine transforms vs finite differences", rel(fine, numeric), 2e-4);
            }
        }
    }
    // coefficient relation between star-Taylor and spherical expansions
    for _ in 0..10 {
        let mut p = rand_quat(rng, 1.0);
        while p.imag().norm() < 0.2 {
            p = rand_quat(rng, 1.0);
        }
        let q = rand_quat(rng, 1.0);
        let a: Vec<Quaternion> = (0..=8).map(|_| rand_quat(rng, 1.0)).collect();
        let (lhs, rhs) = taylor_spherical_relation(&a, p, q, 4)?;
        rec.record("star-Taylor to spherical coefficient relation", rel(lhs, rhs), 1e-9);
    }
    Ok(())
}

fn regions(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    for _ in 0..200 {
        let q = rand_quat(rng, 2.0);
        let p = rand_quat(rng, 2.0);
        let sigma = distance(DistanceKind::Sigma, q, p);
        let tau = distance(DistanceKind::Tau, q, p);
        rec.record("slice distance dominates its conjugate", (tau - sigma).max(0.0), 1e-12);

        // membership is axially symmetric: q and conj(q) agree
        let region = Region::CassiniBall { p, r: 1.0 + sigma };
        let a = region_contains(region, q);
        let b = region_contains(region, q.conj());
        rec.record("region membership is axially symmetric", (a != b) as u8 as f64, 0.0);
    }
    // radius estimate on a geometric coefficient sequence
    let r: f64 = 0.4;
    let coeffs: Vec<Quaternion> = (0..64)
        .map(|n| Quaternion::real(r.powi(-(n as i32))))
        .collect();
    let est = crate::regions::radius_estimate(&coeffs, crate::regions::RadiusSide::Taylor)?;
    rec.record("radius estimate on geometric coefficients", (est - r).abs() / r, 0.05);

    // region JSON round-trips bit-identically
    let region = Region::StarShell { p: rand_quat(rng, 1.0), r1: 0.5, r2: 2.0 };
    let json = serde_json::to_string(&region)?;
    let back: Region = serde_json::from_str(&json)?;
    let json2 = serde_json::to_string(&back)?;
    rec.record("region JSON round-trip", (json != json2) as u8 as f64, 0.0);
    Ok(())
}

fn integrals(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let c = Contour::circle(ImaginaryUnit::E1, 0.0, 2.0, 1024)?;
    for _ in 0..5 {
        let coeffs: Vec<Quaternion> = (0..=5).map(|_| rand_quat(rng, 1.0)).collect();
        let f = MonomialSum::new(coeffs);
        let q = rand_quat(rng, 0.6);
        let v = cauchy_eval(&f, q, &c)?;
        rec.record("Cauchy integral reproduces polynomials", rel(v, f.eval(q)), 1e-8);
        for op in [OperatorId::D, OperatorId::Dbar, OperatorId::Delta] {
            let quad = fine_integral(op, &f, q, &c)?;
            let numeric = apply_numeric(op, &f, q, None)?;
            rec.record("fine integrals vs finite differences", rel(quad, numeric), 1e-6);
        }
    }
    let planes = [
        ImaginaryUnit::E1,
        ImaginaryUnit::E2,
        ImaginaryUnit::new(1.0, 0.0, 1.0)?,
    ];
    let f = MonomialSum::monomial(3);
    let q = Quaternion::new(0.5, 0.2, -0.3, 0.4);
    let dev = slice_independence_check(&f, q, &planes, 0.0, 2.0, 1024, None)?;
    rec.record("integral is independent of the plane", dev, 1e-9);
    Ok(())
}

fn discrepancies(rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    // 1. The star-power binomial expansion carries the sign (-1)^{n-r}; the
    //    unsigned variant contradicts the iterated-product oracle.
    for _ in 0..20 {
        let p = rand_quat(rng, 1.0);
        let q = rand_quat(rng, 1.0);
        let mut unsigned_dev: f64 = 0.0;
        for n in 2..=6u32 {
            let oracle = QQbarPoly::q_minus(p).star_pow(n).eval(q);
            rec.record(
                "signed star-power binomial matches the oracle",
                rel(star_power(p, n as i32, q)?, oracle),
                1e-10,
            );
            let mut unsigned = Quaternion::ZERO;
            for r in 0..=n {
                unsigned += q.powi(r as i32)? * p.powi((n - r) as i32)? * crate::binomial(n, r);
            }
            unsigned_dev = unsigned_dev.max(rel(unsigned, oracle));
        }
        rec.record(
            "unsigned star-power variant is rejected",
            if unsigned_dev > 1e-3 { 0.0 } else { 1.0 },
            0.0,
        );
    }

    // 2. The harmonic-kernel series carries prefactor +1, not -2: the
    //    implemented sum matches the closed kernel and the -2 variant fails.
    for _ in 0..10 {
        let p = rand_quat(rng, 1.0) + Quaternion::real(3.0);
        let q = rand_quat(rng, 0.3);
        if q.norm() >= 0.5 * p.norm() {
            continue;
        }
        let closed = eval_kernel(KernelId::QcInv(1), p, q)?;
        let (sum, _) = kernel_series(KernelId::QcInv(1), p, q, 48)?;
        rec.record("harmonic kernel series matches closed form", rel(sum, closed), 1e-9);
        rec.record(
            "doubled-and-negated series variant is rejected",
            if rel(sum * -2.0, closed) > 1e-2 { 0.0 } else { 1.0 },
            0.0,
        );
    }

    // 3. The two-variable regular family lowers with factor n, not 2n, under
    //    half the conjugate Fueter operator.
    for _ in 0..10 {
        let p = rand_quat(rng, 0.8);
        let q = rand_quat(rng, 1.0);
        for n in 2..=5usize {
            let f = FamilyFn::new(FamilyId::Qt, n, p)?;
            let lhs = apply_numeric(OperatorId::Dbar, &f, q, None)? * 0.5;
            let low = eval_family(FamilyId::Qt, n - 1, Some(p), q)?;
            rec.record(
                "Appell factor n for the two-variable regular family",
                rel(lhs, low * n as f64),
                1e-6,
            );
            rec.record(
                "Appell factor 2n variant is rejected",
                if rel(lhs, low * (2.0 * n as f64)) > 1e-3 { 0.0 } else { 1.0 },
                0.0,
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_group_passes() {
        for report in run_all(1234, 4).unwrap() {
            for c in &report.checks {
                assert!(
                    c.passed(),
                    "group {} check '{}': residual {:.3e} > tol {:.3e}",
                    report.group,
                    c.name,
                    c.residual,
                    c.tol
                );
            }
        }
    }

    #[test]
    fn groups_are_deterministic() {
        let a = run_group("fueter-theorem", 7).unwrap();
        let b = run_group("fueter-theorem", 7).unwrap();
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.residual.to_bits(), y.residual.to_bits(), "{}", x.name);
        }
    }

    #[test]
    fn unknown_group_is_an_error() {
        assert!(run_group("nope", 0).is_err());
    }
}
