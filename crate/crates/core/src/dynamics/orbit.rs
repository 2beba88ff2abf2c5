//! The parabolic equilateral orbit: parametrization by `w = p q`, exact
//! zero-energy verification over the number field, and the residual test
//! certifying that the parametrized curve solves the reduced equations.

use num_complex::Complex64;

use crate::exactalg::field::FieldElement;
use crate::exactalg::poly::{varset, MultiPoly};
use crate::exactalg::{rational_to_f64, Rational};
use crate::model::{
    derive_constants, lagrange_coefficients, DerivedConstants, LagrangeCoefficients,
    MassParameters,
};
use crate::Error;

use super::hamiltonians::{
    reduced_vector_field_hinted, BranchHints, PhysParams, ReducedState,
};

type C64 = Complex64;

/// Everything needed to evaluate the orbit and its variational data at a
/// parameter value: exact coefficients plus their double-precision images.
#[derive(Clone)]
pub struct OrbitContext {
    pub masses: MassParameters,
    pub k: Rational,
    pub consts: DerivedConstants,
    pub coeffs: LagrangeCoefficients,
    pub phys: PhysParams,
    pub k_c: C64,
    // double-precision copies of the orbit coefficients
    pub c_a: C64,
    pub c_b: C64,
    pub c_c: C64,
    pub c_d: C64,
    pub ea: C64,
    pub eb: C64,
    pub ec: C64,
    pub ed: C64,
    pub l1: C64,
    pub l2: C64,
    pub z1: C64,
    pub z2: C64,
    pub z3: C64,
}

impl OrbitContext {
    pub fn new(masses: MassParameters, k: Rational) -> Result<Self, Error> {
        let coeffs = lagrange_coefficients(&masses, &k)?;
        let consts = derive_constants(&masses);
        let phys = PhysParams::of(&masses);
        Ok(Self {
            k_c: C64::new(rational_to_f64(&k), 0.0),
            c_a: coeffs.c_a.eval(),
            c_b: coeffs.c_b.eval(),
            c_c: coeffs.c_c.eval(),
            c_d: coeffs.c_d.eval(),
            ea: coeffs.ea.eval(),
            eb: coeffs.eb.eval(),
            ec: coeffs.ec.eval(),
            ed: coeffs.ed.eval(),
            l1: coeffs.lpoly.0.eval(),
            l2: coeffs.lpoly.1.eval(),
            z1: coeffs.zpoly.0.eval(),
            z2: coeffs.zpoly.1.eval(),
            z3: coeffs.zpoly.2.eval(),
            masses,
            k,
            consts,
            coeffs,
            phys,
        })
    }

    pub fn l_at(&self, w: C64) -> C64 {
        self.l1 * w + self.l2
    }

    pub fn z_at(&self, w: C64) -> C64 {
        (self.z1 * w + self.z2) * w + self.z3
    }

    /// q(w) = -(ea w^2 + eb w + ed)/ec.
    pub fn q_of_w(&self, w: C64) -> C64 {
        -((self.ea * w + self.eb) * w + self.ed) / self.ec
    }

    /// dq/dw = -(2 ea w + eb)/ec.
    pub fn dq_dw(&self, w: C64) -> C64 {
        -(2.0 * self.ea * w + self.eb) / self.ec
    }

    /// The orbit point at parameter `w`.
    pub fn lagrange_orbit(&self, w: C64) -> Result<ReducedState, Error> {
        let q = self.q_of_w(w);
        if q.norm() < 1e-12 {
            return Err(Error::Domain(format!(
                "orbit scale q(w) vanishes at w = {w} (collision-scale singularity)"
            )));
        }
        let p = w / q;
        let half = C64::new(0.5, 0.0);
        let s3h = C64::new(crate::exactalg::field::SQRT3 / 2.0, 0.0);
        Ok(ReducedState {
            q1: q,
            q2: q * half,
            q3: q * s3h,
            p1: p,
            p2: self.c_a * p + self.c_b / q,
            p3: self.c_c * p + self.c_d / q,
            k: self.k_c,
        })
    }

    /// True when `w` is clear of the roots of L and Z (and hence of q).
    pub fn is_regular(&self, w: C64) -> bool {
        self.l_at(w).norm() > 1e-9 && self.z_at(w).norm() > 1e-9
    }

    /// Branch hints valid on (and infinitesimally near) the orbit at `w`:
    /// both mutual distances equal the orbit scale, and the discriminant
    /// root is pinned so the energy-level branch reproduces `p1`.
    pub fn hints_at(&self, w: C64) -> Result<BranchHints, Error> {
        let s = self.lagrange_orbit(w)?;
        let a1 = self.phys.big_m1 / 2.0;
        let b1 = s.p2 / self.phys.m3;
        Ok(BranchHints {
            r2: s.q1,
            r3: s.q1,
            sqrt_delta: -(b1 + 2.0 * a1 * s.p1),
        })
    }

    /// Time derivative of the orbit scale from the closed form
    /// `dq/dt = (M1 + cA/m3) p + cB/(m3 q)`.
    pub fn dq_dt(&self, s: &ReducedState) -> C64 {
        (self.phys.big_m1 + self.c_a / self.phys.m3) * s.p1 + self.c_b / (self.phys.m3 * s.q1)
    }

    /// d/dt of the full orbit point via the chain rule through `w`.
    pub fn orbit_time_derivative(&self, w: C64) -> Result<[C64; 6], Error> {
        if !self.is_regular(w) {
            return Err(Error::Domain(format!("w = {w} is a singular parameter value")));
        }
        let s = self.lagrange_orbit(w)?;
        let v = self.dq_dt(&s); // dq/dt
        let dqdw = self.dq_dw(w);
        let w_dot = v / dqdw;
        let q = s.q1;
        // p1 = w/q
        let p1_dot = (w_dot * q - s.p1 * q * v) / (q * q);
        let scale_dot = -v / (q * q); // d(1/q)/dt
        let half = C64::new(0.5, 0.0);
        let s3h = C64::new(crate::exactalg::field::SQRT3 / 2.0, 0.0);
        Ok([
            v,
            v * half,
            v * s3h,
            p1_dot,
            self.c_a * p1_dot + self.c_b * scale_dot,
            self.c_c * p1_dot + self.c_d * scale_dot,
        ])
    }

    /// Norm of (d Gamma/dt - X_H(Gamma)) at parameter `w`; vanishing up to
    /// roundoff certifies the parametrization solves the reduced system.
    pub fn orbit_residual(&self, w: C64) -> Result<f64, Error> {
        let s = self.lagrange_orbit(w)?;
        if !self.is_regular(w) {
            return Err(Error::Domain(format!("w = {w} is a singular parameter value")));
        }
        let hints = self.hints_at(w)?;
        let field = reduced_vector_field_hinted(&s, &self.masses, &hints)?;
        let tangent = self.orbit_time_derivative(w)?;
        let mut acc = 0.0;
        for i in 0..6 {
            acc += (tangent[i] - field[i]).norm_sqr();
        }
        Ok(acc.sqrt())
    }
}

/// Exact orbit point over Q(sqrt3, i) at rational `w`.
pub struct ExactOrbitPoint {
    pub q1: FieldElement,
    pub q2: FieldElement,
    pub q3: FieldElement,
    pub p1: FieldElement,
    pub p2: FieldElement,
    pub p3: FieldElement,
}

pub fn lagrange_orbit_exact(
    ctx: &OrbitContext,
    w: &Rational,
) -> Result<ExactOrbitPoint, Error> {
    let wf = FieldElement::from_rational(w.clone());
    let q = ctx.coeffs.q_of_w(&wf);
    if q.is_zero() {
        return Err(Error::Domain("orbit scale vanishes at this parameter".into()));
    }
    let half = FieldElement::from_ratio(1, 2);
    let s3h = &FieldElement::sqrt3() * &half;
    let p = &wf / &q;
    let qinv = q.inv();
    Ok(ExactOrbitPoint {
        q2: &q * &half,
        q3: &q * &s3h,
        p2: &(&ctx.coeffs.c_a * &p) + &(&ctx.coeffs.c_b * &qinv),
        p3: &(&ctx.coeffs.c_c * &p) + &(&ctx.coeffs.c_d * &qinv),
        q1: q,
        p1: p,
    })
}

/// Exact value of the reduced Hamiltonian on the equilateral configuration,
/// where all three mutual distances equal `q1` and the evaluation stays in
/// the number field.
pub fn hamiltonian_on_orbit_exact(ctx: &OrbitContext, pt: &ExactOrbitPoint) -> FieldElement {
    let half = FieldElement::from_ratio(1, 2);
    let kf = FieldElement::from_rational(ctx.k.clone());
    let p_ang = &(&(&pt.p3 * &pt.q2) - &(&pt.p2 * &pt.q3)) - &kf;
    let qinv = pt.q1.inv();
    let pu = &p_ang * &qinv;
    let m1 = ctx.masses.alpha_fe();
    let m2 = ctx.masses.beta_fe();
    let big_m1 = &ctx.consts.m1mass;
    let big_m2 = &ctx.consts.m2mass;
    let kinetic1 = &(&half * big_m1) * &(&(&pt.p1 * &pt.p1) + &(&pu * &pu));
    let kinetic2 = &(&half * big_m2) * &(&(&pt.p2 * &pt.p2) + &(&pt.p3 * &pt.p3));
    let cross = &(&pt.p1 * &pt.p2) - &(&pt.p3 * &pu);
    // potential: -(m1 m3 + m3 m2 + m1 m2)/q = -S2/q
    let potential = -&(&ctx.consts.s2 * &qinv);
    &(&(&kinetic1 + &kinetic2) + &cross) + &potential
}

/// Exact symbolic identity: substituting the equilateral parametrization
/// into the reduced Hamiltonian yields `ea p^2 + eb p u + ec u + ed u^2`
/// (with `u = 1/q`), coefficient by coefficient.
pub fn energy_relation_identity(ctx: &OrbitContext) -> bool {
    let vs = varset(&["p", "u"]);
    let p = MultiPoly::var(&vs, "p");
    let u = MultiPoly::var(&vs, "u");
    let half = FieldElement::from_ratio(1, 2);
    let kf = FieldElement::from_rational(ctx.k.clone());
    let sqrt3 = FieldElement::sqrt3();

    // p2 = cA p + cB u, p3 = cC p + cD u
    let p2 = p.scale(&ctx.coeffs.c_a).add(&u.scale(&ctx.coeffs.c_b));
    let p3 = p.scale(&ctx.coeffs.c_c).add(&u.scale(&ctx.coeffs.c_d));
    // P u = (p3 - sqrt3 p2)/2 - k u   (from q2 = 1/(2u), q3 = sqrt3/(2u))
    let pu = p3
        .sub(&p2.scale(&sqrt3))
        .scale(&half)
        .sub(&u.scale(&kf));
    let m1m = &ctx.consts.m1mass;
    let m2m = &ctx.consts.m2mass;
    let h = p
        .mul(&p)
        .add(&pu.mul(&pu))
        .scale(&(&half * m1m))
        .add(&p2.mul(&p2).add(&p3.mul(&p3)).scale(&(&half * m2m)))
        .add(&p.mul(&p2).sub(&p3.mul(&pu)))
        .sub(&u.scale(&ctx.consts.s2));
    let expected = p
        .mul(&p)
        .scale(&ctx.coeffs.ea)
        .add(&p.mul(&u).scale(&ctx.coeffs.eb))
        .add(&u.scale(&ctx.coeffs.ec))
        .add(&u.mul(&u).scale(&ctx.coeffs.ed));
    h.sub(&expected).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn ctx(a: (i64, i64), b: (i64, i64), k: (i64, i64)) -> OrbitContext {
        let m = MassParameters::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap();
        OrbitContext::new(m, ratio(k.0, k.1)).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn equal_mass_orbit_point_at_origin() {
        let ctx = ctx((1, 1), (1, 1), (1, 1));
        let s = ctx.lagrange_orbit(c(0.0, 0.0)).unwrap();
        assert!((s.q1 - c(2.0 / 9.0, 0.0)).norm() < 1e-15);
        assert!((s.q2 - c(1.0 / 9.0, 0.0)).norm() < 1e-15);
        assert!((s.q3 - c(3.0_f64.sqrt() / 9.0, 0.0)).norm() < 1e-15);
        assert!(s.p1.norm() < 1e-15);
        assert!((s.p2 - c(-1.5 * 3.0_f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((s.p3 - c(-1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn orbit_shape_is_equilateral_everywhere() {
        let ctx = ctx((2, 5), (4, 5), (1, 1));
        for w in [c(0.3, 0.2), c(-0.7, 1.1), c(1.4, -0.6)] {
            let s = ctx.lagrange_orbit(w).unwrap();
            assert!((s.q2 / s.q1 - c(0.5, 0.0)).norm() < 1e-14);
            assert!((s.q3 / s.q1 - c(3.0_f64.sqrt() / 2.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn hamiltonian_vanishes_on_orbit_numerically() {
        let ctx = ctx((1, 2), (1, 1), (1, 1));
        for j in 0..20 {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / 20.0;
            let w = 1.5 * c(ang.cos(), ang.sin()) + c(0.1, 0.05);
            if !ctx.is_regular(w) {
                continue;
            }
            let s = ctx.lagrange_orbit(w).unwrap();
            // the equilateral shape needs matching distance branches
            let hints = ctx.hints_at(w).unwrap();
            let pp = PhysParams::of(&ctx.masses);
            let h = super::super::hamiltonians::reduced_h_generic(
                s.q1, s.q2, s.q3, s.p1, s.p2, s.p3, s.k, &pp, &hints,
            );
            assert!(h.norm() < 1e-12, "H = {h} at w = {w}");
        }
    }

    #[test]
    fn hamiltonian_vanishes_on_orbit_exactly() {
        for (a, b, k) in [
            ((1, 1), (1, 1), (1, 1)),
            ((1, 2), (1, 1), (1, 1)),
            ((1, 10), (1, 5), (2, 3)),
        ] {
            let ctx = ctx(a, b, k);
            for w in [rat(0), ratio(1, 3), ratio(-7, 5), rat(2)] {
                let pt = lagrange_orbit_exact(&ctx, &w).unwrap();
                let h = hamiltonian_on_orbit_exact(&ctx, &pt);
                assert!(h.is_zero(), "exact H = {h} at w = {w}");
            }
        }
    }

    #[test]
    fn energy_relation_holds_symbolically() {
        for (a, b, k) in [
            ((1, 1), (1, 1), (1, 1)),
            ((1, 2), (1, 1), (1, 1)),
            ((2, 5), (4, 5), (3, 2)),
            ((1, 10), (1, 5), (1, 1)),
        ] {
            assert!(energy_relation_identity(&ctx(a, b, k)), "identity fails at {a:?},{b:?}");
        }
    }

    #[test]
    fn orbit_residual_vanishes_at_sample_points() {
        let ctx = ctx((1, 1), (1, 1), (1, 1));
        let r = ctx.orbit_residual(c(0.3, 0.0)).unwrap();
        assert!(r < 1e-10, "residual {r}");
        // 100 spread-out regular points in |w| < 2
        let mut checked = 0;
        let mut max_r: f64 = 0.0;
        for j in 0..100 {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / 100.0;
            let rad = 0.15 + 1.8 * (j as f64 / 100.0);
            let w = rad * c(ang.cos(), ang.sin());
            if !ctx.is_regular(w) {
                continue;
            }
            max_r = max_r.max(ctx.orbit_residual(w).unwrap());
            checked += 1;
        }
        assert!(checked > 90);
        assert!(max_r < 1e-10, "max residual {max_r}");
    }

    #[test]
    fn orbit_residual_vanishes_for_asymmetric_masses() {
        let ctx = ctx((1, 10), (1, 5), (1, 1));
        for w in [c(0.4, 0.3), c(-0.9, 0.7), c(1.3, -1.1)] {
            let r = ctx.orbit_residual(w).unwrap();
            assert!(r < 1e-10, "residual {r} at {w}");
        }
    }

    #[test]
    fn singular_parameters_rejected() {
        let ctx = ctx((1, 1), (1, 1), (1, 1));
        // root of Z: Z = 9 w^2 - 3 sqrt3 w + 3 -> w = (sqrt3 +- i 3)/6... use the model layer
        let sp = crate::model::singular_points(&ctx.masses, &ctx.k).unwrap();
        let w3 = sp.w3.eval();
        assert!(ctx.lagrange_orbit(w3).is_err() || ctx.orbit_residual(w3).is_err());
        let w2 = sp.w2.eval();
        assert!(ctx.orbit_residual(w2).is_err());
    }
}
