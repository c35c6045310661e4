//! Contour quadrature on circles in a complex plane: the Cauchy-type
//! reproducing integral and the three fine-structure integral
//! representations, discretized with the periodic trapezoid rule.

use crate::error::Error;
use crate::kernels::{eval_kernel, KernelId};
use crate::operators::OperatorId;
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::slicefn::SliceFunction;
use crate::Result;

/// A positively oriented circle in the plane `C_I`, discretized with `nodes`
/// equispaced points. The measure convention is `dp_I = dp (-I)`, so one node
/// carries the weight `(2 pi r / M) e^{I theta_k}`.
#[derive(Clone, Copy, Debug)]
pub struct Contour {
    pub plane: ImaginaryUnit,
    /// Center `center_u + I center_v` in the plane.
    pub center_u: f64,
    pub center_v: f64,
    pub radius: f64,
    pub nodes: usize,
}

impl Contour {
    pub fn circle(plane: ImaginaryUnit, center_u: f64, radius: f64, nodes: usize) -> Result<Self> {
        if radius <= 0.0 || nodes < 8 {
            return Err(Error::InvalidArgument(
                "contour needs a positive radius and at least 8 nodes".into(),
            ));
        }
        Ok(Self { plane, center_u, center_v: 0.0, radius, nodes })
    }

    fn node(&self, k: usize) -> (Quaternion, Quaternion) {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / self.nodes as f64;
        let i = self.plane.as_quat();
        // e^{I theta} in the plane
        let e = Quaternion::real(theta.cos()) + i * theta.sin();
        let p = Quaternion::real(self.center_u) + i * self.center_v + e * self.radius;
        let w = e * (2.0 * std::f64::consts::PI * self.radius / self.nodes as f64);
        (p, w)
    }

    /// Node spacing along the circle.
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.radius / self.nodes as f64
    }

    /// Distance from the sphere of `q` to the contour (both plane
    /// representatives of `q` are checked).
    pub fn distance_to_sphere(&self, q: Quaternion) -> f64 {
        let (u, v, _) = q.slice_coords();
        let du = u - self.center_u;
        let d = |w: f64| ((du * du + (w - self.center_v) * (w - self.center_v)).sqrt()
            - self.radius)
            .abs();
        d(v).min(d(-v))
    }

    fn check_conditioning(&self, q: Quaternion) -> Result<()> {
        let distance = self.distance_to_sphere(q);
        let spacing = self.spacing();
        if distance < 2.0 * spacing {
            return Err(Error::IllConditionedContour { distance, spacing });
        }
        Ok(())
    }
}

/// Accumulate `sum_k K(p_k) w_k f(p_k)` in fixed node order with compensated
/// summation.
fn quadrature(
    c: &Contour,
    kernel: impl Fn(Quaternion) -> Result<Quaternion>,
    f: &dyn SliceFunction,
) -> Result<Quaternion> {
    let mut sum = Quaternion::ZERO;
    let mut comp = Quaternion::ZERO;
    for k in 0..c.nodes {
        let (p, w) = c.node(k);
        let t = kernel(p)? * w * f.eval(p);
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    Ok(sum)
}

/// Reproduce a slice-regular `f` at `q` from its values on the contour:
/// `(1 / 2 pi) \oint S_L_inv(p, q) dp_I f(p)`.
pub fn cauchy_eval(f: &dyn SliceFunction, q: Quaternion, c: &Contour) -> Result<Quaternion> {
    c.check_conditioning(q)?;
    let v = quadrature(c, |p| eval_kernel(KernelId::SLInvI, p, q), f)?;
    Ok(v / (2.0 * std::f64::consts::PI))
}

/// The three fine-structure integral representations of `op f` at `q`:
///
/// * `D f     = (-1/pi)   \oint Q_c_inv(p, q) dp_I f(p)`;
/// * `Dbar f  = (1/2 pi)  \oint P2_L(p, q)  dp_I f(p)`;
/// * `Delta f = (1/2 pi)  \oint F_L(p, q)   dp_I f(p)`.
pub fn fine_integral(
    op: OperatorId,
    f: &dyn SliceFunction,
    q: Quaternion,
    c: &Contour,
) -> Result<Quaternion> {
    c.check_conditioning(q)?;
    let pi = std::f64::consts::PI;
    let (kernel, pref) = match op {
        OperatorId::D => (KernelId::QcInv(1), -1.0 / pi),
        OperatorId::Dbar => (KernelId::P2L, 0.5 / pi),
        OperatorId::Delta => (KernelId::FL, 0.5 / pi),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no integral representation for {other:?}"
            )))
        }
    };
    Ok(quadrature(c, |p| eval_kernel(kernel, p, q), f)? * pref)
}

/// Evaluate the same integral over the same circle geometry placed in each of
/// the supplied planes (center on the real axis) and return the maximum
/// pairwise deviation; `op = None` runs the reproducing Cauchy integral.
pub fn slice_independence_check(
    f: &dyn SliceFunction,
    q: Quaternion,
    planes: &[ImaginaryUnit],
    center_u: f64,
    radius: f64,
    nodes: usize,
    op: Option<OperatorId>,
) -> Result<f64> {
    let mut values = Vec::with_capacity(planes.len());
    for &plane in planes {
        let c = Contour::circle(plane, center_u, radius, nodes)?;
        values.push(match op {
            None => cauchy_eval(f, q, &c)?,
            Some(op) => fine_integral(op, f, q, &c)?,
        });
    }
    let mut dev: f64 = 0.0;
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            dev = dev.max(values[a].dist(values[b]));
        }
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{apply_numeric, rep_formula};
    use crate::slicefn::MonomialSum;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn contour(radius: f64, nodes: usize) -> Contour {
        Contour::circle(ImaginaryUnit::E1, 0.0, radius, nodes).unwrap()
    }

    #[test]
    fn reproduces_constants_and_kills_exterior_points() {
        let f = MonomialSum::constant(Quaternion::new(1.0, -2.0, 0.5, 0.0));
        let c = contour(2.0, 256);
        let q = Quaternion::new(0.3, 0.4, -0.2, 0.1);
        let v = cauchy_eval(&f, q, &c).unwrap();
        assert!(v.dist(f.coeffs[0]) <= 1e-10);

        let outside = Quaternion::new(3.5, 0.5, 0.0, 0.0);
        let v = cauchy_eval(&f, outside, &c).unwrap();
        assert!(v.norm() <= 1e-10);
    }

    #[test]
    fn reproduces_cubic_off_plane() {
        let f = MonomialSum::monomial(3);
        let q = Quaternion::new(0.5, 0.0, 0.5, 0.0);
        let v = cauchy_eval(&f, q, &contour(2.0, 1024)).unwrap();
        let direct = q * q * q;
        assert!(v.dist(direct) <= 1e-8, "{v:?} vs {direct:?}");
    }

    #[test]
    fn frozen_fine_integrals() {
        let c = contour(2.0, 1024);
        let q = Quaternion::new(0.5, 0.5, 0.0, 0.0);

        // D q^2 = -4 q0
        let v = fine_integral(OperatorId::D, &MonomialSum::monomial(2), q, &c).unwrap();
        assert!(v.dist(Quaternion::real(-4.0 * q.q0)) <= 1e-8, "{v:?}");

        // constants die under all three operators
        let one = MonomialSum::constant(Quaternion::ONE);
        for op in [OperatorId::D, OperatorId::Dbar, OperatorId::Delta] {
            assert!(fine_integral(op, &one, q, &c).unwrap().norm() <= 1e-10);
        }

        // Delta q^3 = -12 CA_1(q) = -4 (2q + conj q)
        let v = fine_integral(OperatorId::Delta, &MonomialSum::monomial(3), q, &c).unwrap();
        let expect = (q * 2.0 + q.conj()) * -4.0;
        assert!(v.dist(expect) <= 1e-8, "{v:?} vs {expect:?}");
    }

    #[test]
    fn trapezoid_error_decays_geometrically() {
        let f = MonomialSum::new(vec![
            Quaternion::ONE,
            Quaternion::E2,
            Quaternion::new(0.5, 0.0, -1.0, 0.25),
            Quaternion::real(-0.75),
            Quaternion::E3,
        ]);
        let q = Quaternion::new(0.4, 0.3, 0.6, -0.2);
        let exact = f.eval(q);
        let err = |m: usize| cauchy_eval(&f, q, &contour(2.0, m)).unwrap().dist(exact);
        let (e256, e512) = (err(256), err(512));
        assert!(
            e512 * 10.0 <= e256 || e512 <= 1e-13,
            "no geometric decay: {e256} -> {e512}"
        );
    }

    #[test]
    fn fine_integrals_match_other_operator_paths() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..6 {
            let coeffs: Vec<Quaternion> = (0..=5)
                .map(|_| {
                    Quaternion::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    )
                })
                .collect();
            let f = MonomialSum::new(coeffs);
            let q = Quaternion::new(
                rng.gen_range(-0.6..0.6),
                rng.gen_range(-0.6..0.6),
                rng.gen_range(-0.6..0.6),
                rng.gen_range(-0.6..0.6),
            );
            let c = contour(2.5, 2048);
            for op in [OperatorId::D, OperatorId::Dbar, OperatorId::Delta] {
                let quad = fine_integral(op, &f, q, &c).unwrap();
                let num = apply_numeric(op, &f, q, None).unwrap();
                let rep = rep_formula(op, &f, q, None).unwrap();
                let scale = 1.0 + num.norm();
                assert!(quad.dist(num) <= 1e-6 * scale, "{op:?} quad vs numeric");
                assert!(quad.dist(rep) <= 1e-6 * scale, "{op:?} quad vs representation");
            }
        }
    }

    #[test]
    fn harmonic_residue_form() {
        // fine_integral(D, f, q) agrees with the two-point residue expression
        // evaluated through an arbitrary plane
        let f = MonomialSum::new(vec![
            Quaternion::real(0.5),
            Quaternion::E3,
            Quaternion::new(1.0, 0.5, 0.0, -0.25),
            Quaternion::real(1.5),
        ]);
        let q = Quaternion::new(0.3, -0.4, 0.5, 0.2);
        let quad = fine_integral(OperatorId::D, &f, q, &contour(2.0, 1024)).unwrap();
        for plane in [None, Some(ImaginaryUnit::E2)] {
            let rep = rep_formula(OperatorId::D, &f, q, plane).unwrap();
            assert!(quad.dist(rep) <= 1e-8 * (1.0 + quad.norm()), "plane {plane:?}");
        }
    }

    #[test]
    fn near_contour_points_are_rejected() {
        let c = contour(2.0, 64);
        // |q| close to the radius: within two node spacings
        let q = Quaternion::new(0.0, 1.9, 0.0, 0.0);
        assert!(matches!(
            cauchy_eval(&MonomialSum::monomial(1), q, &c),
            Err(Error::IllConditionedContour { .. })
        ));
    }

    #[test]
    fn integrals_are_plane_independent() {
        let planes = [
            ImaginaryUnit::E1,
            ImaginaryUnit::E2,
            ImaginaryUnit::new(1.0, 0.0, 1.0).unwrap(),
        ];
        let f = MonomialSum::monomial(2);
        let q = Quaternion::new(0.5, 0.2, -0.3, 0.4);
        let dev = slice_independence_check(&f, q, &planes, 0.0, 2.0, 1024, None).unwrap();
        assert!(dev < 1e-9, "cauchy deviation {dev}");
        for op in [OperatorId::D, OperatorId::Dbar, OperatorId::Delta] {
            let dev = slice_independence_check(&f, q, &planes, 0.0, 2.0, 1024, Some(op)).unwrap();
            assert!(dev < 1e-9, "{op:?} deviation {dev}");
        }

        // contour independence: two radii enclosing q
        let a = cauchy_eval(&f, q, &contour(1.5, 1024)).unwrap();
        let b = cauchy_eval(&f, q, &contour(2.5, 1024)).unwrap();
        assert!(a.dist(b) < 1e-9);
    }
}
