//! End-to-end acceptance checks. Each criterion prints exactly one
//! `criterion N (...): PASS`/`FAIL` line (visible with `--nocapture`) and
//! fails the test on any violation.

use std::time::Instant;

use finestruct::contour::{cauchy_eval, fine_integral, slice_independence_check, Contour};
use finestruct::families::{eval_family, FamilyFn, FamilyId};
use finestruct::kernels::{eval_kernel, kernel_series, kernel_splitting, KernelId};
use finestruct::operators::{
    apply_exact, apply_numeric, rep_formula, ExactTarget, OperatorId,
};
use finestruct::quat::{ImaginaryUnit, Quaternion};
use finestruct::series::{
    eval_fine_series, eval_fine_spherical, eval_series, fine_transform, taylor_spherical_relation,
    SeriesKind, SeriesSpec,
};
use finestruct::slicefn::{MonomialSum, PointwiseSlice, SliceFunction};
use finestruct::star::companion;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn criterion(n: u32, label: &str, run: impl FnOnce() -> Result<(), String>) {
    match run() {
        Ok(()) => println!("criterion {n} ({label}): PASS"),
        Err(msg) => {
            println!("criterion {n} ({label}): FAIL — {msg}");
            panic!("criterion {n} ({label}) failed: {msg}");
        }
    }
}

fn rand_quat(rng: &mut ChaCha8Rng, w: f64) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-w..w),
        rng.gen_range(-w..w),
        rng.gen_range(-w..w),
        rng.gen_range(-w..w),
    )
}

fn rel(a: Quaternion, b: Quaternion) -> f64 {
    a.dist(b) / (1.0 + a.norm().max(b.norm()))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[test]
fn criterion_1_operator_oracle_equivalence() {
    criterion(1, "closed operator actions vs finite differences", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let ops = [OperatorId::D, OperatorId::Dbar, OperatorId::Delta, OperatorId::Dq0];
        let mut cases = 0usize;
        for _ in 0..50 {
            let p = rand_quat(&mut rng, 1.0);
            let mut q = rand_quat(&mut rng, 1.2);
            while companion(p, q).norm() < 0.5 || q.imag().norm() < 0.05 {
                q = rand_quat(&mut rng, 1.2);
            }
            let mut targets = Vec::new();
            for n in -5..=8i32 {
                targets.push(ExactTarget::StarPower { p, n });
            }
            for n in -6..=6i32 {
                for linear_factor in [false, true] {
                    targets.push(ExactTarget::Block { p, n, linear_factor });
                }
            }
            for t in targets {
                for op in ops {
                    let exact = apply_exact(op, t, q).map_err(|e| e.to_string())?;
                    let numeric =
                        apply_numeric(op, &t.as_fn(), q, None).map_err(|e| e.to_string())?;
                    check(rel(exact, numeric) <= 1e-5, || {
                        format!("{op:?} on {t:?} at {q}: exact {exact} vs numeric {numeric}")
                    })?;
                    cases += 1;
                }
                // the left global operator annihilates star powers
                if let ExactTarget::StarPower { .. } = t {
                    let exact = apply_exact(OperatorId::VLeft, t, q).map_err(|e| e.to_string())?;
                    let numeric = apply_numeric(OperatorId::VLeft, &t.as_fn(), q, None)
                        .map_err(|e| e.to_string())?;
                    check(exact == Quaternion::ZERO && rel(exact, numeric) <= 1e-5, || {
                        format!("V_left on {t:?} at {q}: numeric {numeric}")
                    })?;
                }
            }
        }
        let elapsed = start.elapsed();
        check(elapsed.as_secs_f64() < 30.0, || {
            format!("{cases} cases took {elapsed:?} (budget 30 s)")
        })
    });
}

#[test]
fn criterion_2_fueter_factorization() {
    criterion(2, "Laplacian factors through D and Dbar", || {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        for _ in 0..20 {
            let coeffs: Vec<Quaternion> = (0..=6).map(|_| rand_quat(&mut rng, 1.0)).collect();
            let f = MonomialSum::new(coeffs);
            let mut q = rand_quat(&mut rng, 1.0);
            while q.imag().norm() < 0.2 {
                q = rand_quat(&mut rng, 1.0);
            }
            let lap = apply_numeric(OperatorId::Delta, &f, q, None).map_err(|e| e.to_string())?;
            let scale = 1.0 + lap.norm();

            let dbar_f = PointwiseSlice::new(|x| {
                rep_formula(OperatorId::Dbar, &f, x, None).unwrap_or(Quaternion::ZERO)
            });
            let d_f = PointwiseSlice::new(|x| {
                rep_formula(OperatorId::D, &f, x, None).unwrap_or(Quaternion::ZERO)
            });
            let a = apply_numeric(OperatorId::D, &dbar_f, q, None).map_err(|e| e.to_string())?;
            let b = apply_numeric(OperatorId::Dbar, &d_f, q, None).map_err(|e| e.to_string())?;
            check(a.dist(lap) <= 1e-5 * scale, || {
                format!("D(Dbar f) = {a} vs Delta f = {lap} at {q}")
            })?;
            check(b.dist(lap) <= 1e-5 * scale, || {
                format!("Dbar(D f) = {b} vs Delta f = {lap} at {q}")
            })?;

            // D(Delta f) = 0: the image of the Laplacian is Fueter regular
            let lap_f = PointwiseSlice::new(|x| {
                rep_formula(OperatorId::Delta, &f, x, None).unwrap_or(Quaternion::ZERO)
            });
            let r = apply_numeric(OperatorId::D, &lap_f, q, None).map_err(|e| e.to_string())?;
            check(r.norm() <= 1e-4 * scale, || {
                format!("D(Delta f) = {r} at {q}, scale {scale}")
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_3_kernel_consistency() {
    criterion(3, "Cauchy-type kernels and their splittings", || {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        for _ in 0..50 {
            let p = rand_quat(&mut rng, 1.5);
            let mut q = rand_quat(&mut rng, 1.5);
            while companion(q, p).norm() < 0.5 || q.imag().norm() < 0.1 {
                q = rand_quat(&mut rng, 1.5);
            }
            let e = |id| eval_kernel(id, p, q).map_err(|err| err.to_string());

            let sl = e(KernelId::SLInvI)?;
            check(rel(sl, e(KernelId::SLInvII)?) <= 1e-11, || {
                format!("S_L_inv forms differ at p={p}, q={q}")
            })?;
            check(rel(e(KernelId::SRInvI)?, e(KernelId::SRInvII)?) <= 1e-11, || {
                format!("S_R_inv forms differ at p={p}, q={q}")
            })?;

            let slfn = PointwiseSlice::new(|x| {
                eval_kernel(KernelId::SLInvI, p, x).unwrap_or(Quaternion::ZERO)
            });
            let pairs: [(OperatorId, Quaternion, f64); 3] = [
                (OperatorId::D, e(KernelId::QcInv(1))? * -2.0, 1e-6),
                (OperatorId::Dbar, e(KernelId::P2L)?, 1e-5),
                (OperatorId::Delta, e(KernelId::FL)?, 1e-5),
            ];
            for (op, expect, tol) in pairs {
                let numeric =
                    apply_numeric(op, &slfn, q, None).map_err(|err| err.to_string())?;
                check(rel(numeric, expect) <= tol, || {
                    format!("{op:?} S_L_inv = {numeric} vs {expect} at p={p}, q={q}")
                })?;
            }

            for id in [KernelId::QcInv(1), KernelId::P2L, KernelId::FL] {
                let split = kernel_splitting(id, p, q).map_err(|err| err.to_string())?;
                check(rel(split, e(id)?) <= 1e-9, || {
                    format!("splitting of {id:?} fails at p={p}, q={q}")
                })?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_4_series_machinery() {
    criterion(4, "fine transforms and kernel expansions", || {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let fine_ops = [OperatorId::D, OperatorId::Dbar, OperatorId::Delta];

        // Taylor-side transforms (families Ht, P2t, Qt) at 50 interior points
        let p = rand_quat(&mut rng, 0.4);
        let mut taylor = SeriesSpec::new(SeriesKind::StarTaylor, p);
        for n in 0..=6i64 {
            taylor = taylor.with_coeff(n, rand_quat(&mut rng, 1.0));
        }
        let taylor_fn = PointwiseSlice::new(|x| {
            eval_series(&taylor, x).map(|v| v.value).unwrap_or(Quaternion::ZERO)
        });
        for _ in 0..50 {
            let q = p + rand_quat(&mut rng, 0.8);
            for op in fine_ops {
                let fine = eval_fine_series(
                    &fine_transform(&taylor, op).map_err(|e| e.to_string())?,
                    q,
                )
                .map_err(|e| e.to_string())?;
                let numeric =
                    apply_numeric(op, &taylor_fn, q, None).map_err(|e| e.to_string())?;
                check(rel(fine, numeric) <= 1e-5, || {
                    format!("Taylor {op:?} transform: {fine} vs {numeric} at {q}")
                })?;
            }
        }

        // Laurent-side transforms (families Hcal, R2, Mcal) away from the
        // singular sphere of the center
        let mut laurent = SeriesSpec::new(SeriesKind::StarLaurent, p);
        for n in -4..=4i64 {
            laurent = laurent.with_coeff(n, rand_quat(&mut rng, 1.0));
        }
        let laurent_fn = PointwiseSlice::new(|x| {
            eval_series(&laurent, x).map(|v| v.value).unwrap_or(Quaternion::ZERO)
        });
        let mut done = 0;
        while done < 50 {
            let q = rand_quat(&mut rng, 2.0);
            if companion(p, q).norm() < 1.5 || q.imag().norm() < 0.1 {
                continue;
            }
            done += 1;
            for op in fine_ops {
                let fine = eval_fine_series(
                    &fine_transform(&laurent, op).map_err(|e| e.to_string())?,
                    q,
                )
                .map_err(|e| e.to_string())?;
                let numeric =
                    apply_numeric(op, &laurent_fn, q, None).map_err(|e| e.to_string())?;
                check(rel(fine, numeric) <= 1e-5, || {
                    format!("Laurent {op:?} transform: {fine} vs {numeric} at {q}")
                })?;
            }
        }

        // spherical expansions transform termwise
        let mut center = rand_quat(&mut rng, 0.6);
        while center.imag().norm() < 0.2 {
            center = rand_quat(&mut rng, 0.6);
        }
        let mut spherical = SeriesSpec::new(SeriesKind::Spherical, center);
        for n in 0..=6i64 {
            spherical = spherical.with_coeff(n, rand_quat(&mut rng, 1.0));
        }
        let spherical_fn = PointwiseSlice::new(|x| {
            eval_series(&spherical, x).map(|v| v.value).unwrap_or(Quaternion::ZERO)
        });
        for _ in 0..50 {
            let mut q = center + rand_quat(&mut rng, 0.8);
            while q.imag().norm() < 0.1 {
                q = center + rand_quat(&mut rng, 0.8);
            }
            for op in fine_ops {
                let fine =
                    eval_fine_spherical(&spherical, op, q).map_err(|e| e.to_string())?;
                let numeric =
                    apply_numeric(op, &spherical_fn, q, None).map_err(|e| e.to_string())?;
                check(rel(fine, numeric) <= 1e-5, || {
                    format!("spherical {op:?} transform: {fine} vs {numeric} at {q}")
                })?;
            }
        }

        // star-Taylor <-> spherical coefficient relation
        for _ in 0..20 {
            let mut c = rand_quat(&mut rng, 1.0);
            while c.imag().norm() < 0.2 {
                c = rand_quat(&mut rng, 1.0);
            }
            let q = rand_quat(&mut rng, 1.0);
            let a: Vec<Quaternion> = (0..=8).map(|_| rand_quat(&mut rng, 1.0)).collect();
            let (lhs, rhs) = taylor_spherical_relation(&a, c, q, 4).map_err(|e| e.to_string())?;
            check(rel(lhs, rhs) <= 1e-9, || {
                format!("coefficient relation: {lhs} vs {rhs} at center {c}")
            })?;
        }

        // kernel expansions match the closed kernels, with geometric decay at
        // ratio |q|/|p|
        let pk = Quaternion::real(2.0);
        let qk = Quaternion::new(0.1, 0.2, -0.2, 0.0); // |q| = 0.3
        for id in [KernelId::SLInvI, KernelId::QcInv(1), KernelId::P2L, KernelId::FL] {
            let closed = eval_kernel(id, pk, qk).map_err(|e| e.to_string())?;
            let (sum, tail) = kernel_series(id, pk, qk, 40).map_err(|e| e.to_string())?;
            check(sum.dist(closed) <= tail + 1e-9, || {
                format!("{id:?} series {sum} vs closed {closed} (tail {tail:.3e})")
            })?;
        }
        let qs = Quaternion::new(0.6, 0.8, 0.0, 0.0) * 1.2; // |q|/|p| = 0.6
        let ratio = qs.norm() / pk.norm();
        for id in [KernelId::SLInvI, KernelId::QcInv(1)] {
            let closed = eval_kernel(id, pk, qs).map_err(|e| e.to_string())?;
            let err_n = |n: usize| {
                kernel_series(id, pk, qs, n)
                    .map(|(s, _)| s.dist(closed))
                    .map_err(|e| e.to_string())
            };
            let (e20, e40) = (err_n(20)?, err_n(40)?);
            let slope = (e40 / e20).powf(1.0 / 20.0);
            check((slope - ratio).abs() <= 0.1 * ratio, || {
                format!("{id:?} decay ratio {slope:.4} vs |q|/|p| = {ratio}")
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_5_integral_representations() {
    criterion(5, "contour quadrature", || {
        let mut rng = ChaCha8Rng::seed_from_u64(505);
        let c = Contour::circle(ImaginaryUnit::E1, 0.0, 2.0, 1024).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let coeffs: Vec<Quaternion> = (0..=5).map(|_| rand_quat(&mut rng, 1.0)).collect();
            let f = MonomialSum::new(coeffs);
            let q = rand_quat(&mut rng, 0.6);
            let v = cauchy_eval(&f, q, &c).map_err(|e| e.to_string())?;
            check(v.dist(f.eval(q)) <= 1e-8 * (1.0 + v.norm()), || {
                format!("Cauchy integral {v} vs direct {:?} at {q}", f.eval(q))
            })?;
            for op in [OperatorId::D, OperatorId::Dbar, OperatorId::Delta] {
                let quad = fine_integral(op, &f, q, &c).map_err(|e| e.to_string())?;
                let numeric = apply_numeric(op, &f, q, None).map_err(|e| e.to_string())?;
                let scale = 1.0 + numeric.norm();
                check(quad.dist(numeric) <= 1e-6 * scale, || {
                    format!("{op:?} integral {quad} vs numeric {numeric} at {q}")
                })?;
                if q.imag().norm() > 0.1 {
                    let repf = rep_formula(op, &f, q, None).map_err(|e| e.to_string())?;
                    check(quad.dist(repf) <= 1e-6 * scale, || {
                        format!("{op:?} integral {quad} vs representation {repf} at {q}")
                    })?;
                }
            }
        }
        let planes = [
            ImaginaryUnit::E1,
            ImaginaryUnit::E2,
            ImaginaryUnit::new(1.0, 0.0, 1.0).map_err(|e| e.to_string())?,
        ];
        let f = MonomialSum::monomial(3);
        let q = Quaternion::new(0.5, 0.2, -0.3, 0.4);
        for op in [None, Some(OperatorId::D), Some(OperatorId::Dbar), Some(OperatorId::Delta)] {
            let dev = slice_independence_check(&f, q, &planes, 0.0, 2.0, 1024, op)
                .map_err(|e| e.to_string())?;
            check(dev < 1e-9, || format!("{op:?} plane deviation {dev:.3e}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_6_family_properties() {
    criterion(6, "polynomial family properties", || {
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        // norm bounds at 500 points
        for _ in 0..500 {
            let q = rand_quat(&mut rng, 2.0);
            for n in 0..=10usize {
                let bound = q.norm().powi(n as i32) * (1.0 + 1e-12);
                let h = eval_family(FamilyId::H, n, None, q).map_err(|e| e.to_string())?;
                let ca = eval_family(FamilyId::CA, n, None, q).map_err(|e| e.to_string())?;
                check(h.norm() <= bound, || format!("|H_{n}({q})| = {} > {bound}", h.norm()))?;
                check(ca.norm() <= bound, || format!("|CA_{n}({q})| = {} > {bound}", ca.norm()))?;
            }
        }
        for _ in 0..20 {
            let q = rand_quat(&mut rng, 1.0);
            let p = rand_quat(&mut rng, 1.0);
            for n in 1..=10usize {
                let nf = n as f64;
                // Appell relations
                let h = FamilyFn::new(FamilyId::H, n, Quaternion::ZERO).map_err(|e| e.to_string())?;
                let dh = apply_numeric(OperatorId::Dq0, &h, q, None).map_err(|e| e.to_string())?;
                let h1 = eval_family(FamilyId::H, n - 1, None, q).map_err(|e| e.to_string())?;
                check(rel(dh, h1 * nf) <= 1e-6, || format!("d_q0 H_{n} at {q}"))?;

                let ca = FamilyFn::new(FamilyId::CA, n, Quaternion::ZERO).map_err(|e| e.to_string())?;
                let dca = apply_numeric(OperatorId::Dbar, &ca, q, None).map_err(|e| e.to_string())?;
                let ca1 = eval_family(FamilyId::CA, n - 1, None, q).map_err(|e| e.to_string())?;
                check(rel(dca * 0.5, ca1 * nf) <= 1e-6, || format!("(Dbar/2) CA_{n} at {q}"))?;

                // polyanalytic decompositions
                let lhs = eval_family(FamilyId::P2, n, None, q).map_err(|e| e.to_string())?;
                let rhs = eval_family(FamilyId::CA, n, None, q).map_err(|e| e.to_string())? * (nf + 2.0)
                    - ca1 * (q.q0 * nf);
                check(rel(lhs, rhs) <= 1e-9, || format!("P2_{n} decomposition at {q}"))?;

                let lhs = eval_family(FamilyId::P2t, n, Some(p), q).map_err(|e| e.to_string())?;
                let qt = eval_family(FamilyId::Qt, n, Some(p), q).map_err(|e| e.to_string())?;
                let qt1 = eval_family(FamilyId::Qt, n - 1, Some(p), q).map_err(|e| e.to_string())?;
                let rhs = qt * (nf + 2.0) + qt1 * p * nf - qt1 * (q.q0 * nf);
                check(rel(lhs, rhs) <= 1e-9, || format!("P2t_{n} decomposition at {q}"))?;

                let lhs = eval_family(FamilyId::R2, n, Some(p), q).map_err(|e| e.to_string())?;
                let rhs = finestruct::star::star_power(p, n as i32 + 1, q.conj())
                    .map_err(|e| e.to_string())?
                    * nf
                    + eval_family(FamilyId::Hcal, n, Some(p), q).map_err(|e| e.to_string())?
                        * companion(p, q);
                check(rel(lhs, rhs) <= 1e-9, || format!("R2_{n} decomposition at {q}"))?;
            }
        }
        // kernel-of-operator memberships
        for _ in 0..10 {
            let q = rand_quat(&mut rng, 1.0);
            for n in 0..=8usize {
                let scale = 1.0 + (1.0 + q.norm()).powi(n as i32) * (n * n + 1) as f64;
                let h = FamilyFn::new(FamilyId::H, n, Quaternion::ZERO).map_err(|e| e.to_string())?;
                let lap = apply_numeric(OperatorId::Delta, &h, q, None).map_err(|e| e.to_string())?;
                check(lap.norm() <= 1e-6 * scale, || format!("Delta H_{n} = {lap} at {q}"))?;

                let ca = FamilyFn::new(FamilyId::CA, n, Quaternion::ZERO).map_err(|e| e.to_string())?;
                let d = apply_numeric(OperatorId::D, &ca, q, None).map_err(|e| e.to_string())?;
                check(d.norm() <= 1e-6 * scale, || format!("D CA_{n} = {d} at {q}"))?;

                // P2_n is axially polyanalytic of order 2: D^2 P2_n = 0
                let p2 = FamilyFn::new(FamilyId::P2, n, Quaternion::ZERO).map_err(|e| e.to_string())?;
                let inner = PointwiseSlice::new(|x| {
                    apply_numeric(OperatorId::D, &p2, x, None).unwrap_or(Quaternion::ZERO)
                });
                let dd = apply_numeric(OperatorId::D, &inner, q, None).map_err(|e| e.to_string())?;
                check(dd.norm() <= 1e-3 * scale, || format!("D^2 P2_{n} = {dd} at {q}"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_7_documented_discrepancies() {
    criterion(7, "oracle-resolved print discrepancies", || {
        let report = finestruct::verify::run_group("discrepancies", 707).map_err(|e| e.to_string())?;
        for c in &report.checks {
            check(c.passed(), || {
                format!("'{}' residual {:.3e} > tol {:.3e}", c.name, c.residual, c.tol)
            })?;
        }
        check(report.checks.len() == 6, || {
            format!("expected 6 checks (3 identities + 3 rejected variants), got {}", report.checks.len())
        })
    });
}
