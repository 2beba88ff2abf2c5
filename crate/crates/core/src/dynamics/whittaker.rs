//! Energy-level reduction: solving `H = 0` for `p1` and the resulting
//! two-degree nonautonomous Hamiltonian `K = -K_minus` with `q1` as time.

use num_complex::Complex64;

use crate::model::MassParameters;
use crate::numeric::dual::{CScalar, Dual};
use crate::Error;

use super::hamiltonians::{reduced_h_generic, BranchHints, PhysParams, TransverseState};

type C64 = Complex64;

/// The quadratic-in-`p1` coefficients of `H = 0`:
/// `a1 p1^2 + b1 p1 + c1 = 0` with `a1 = M1/2`, `b1 = p2/m3`,
/// `c1 = H restricted to p1 = 0`.
pub fn level_quadratic<T: CScalar>(
    q1: T,
    q2: T,
    q3: T,
    p2: T,
    p3: T,
    k: T,
    pp: &PhysParams,
    hints: &BranchHints,
) -> (T, T, T) {
    let a1 = T::from_f64(pp.big_m1 / 2.0);
    let b1 = p2 / T::from_f64(pp.m3);
    let c1 = reduced_h_generic(q1, q2, q3, T::zero(), p2, p3, k, pp, hints);
    (a1, b1, c1)
}

/// Both roots `(K_plus, K_minus)` of the energy level `H = 0` in `p1`.
///
/// The branch of the discriminant root follows `hints.sqrt_delta`; seeding
/// that hint from the orbit makes `K_minus` the root matching the orbit's
/// `p1` (see `OrbitContext::hints_at`).
pub fn p1_branch(
    ts: &TransverseState,
    q1: C64,
    m: &MassParameters,
    k: C64,
    hints: &BranchHints,
) -> Result<(C64, C64), Error> {
    let pp = PhysParams::of(m);
    let (a1, b1, c1) = level_quadratic(q1, ts.q2, ts.q3, ts.p2, ts.p3, k, &pp, hints);
    let delta = b1 * b1 - 4.0 * a1 * c1;
    if delta.norm() < 1e-12 {
        return Err(Error::Domain(
            "discriminant vanishes: branch point of the energy level".into(),
        ));
    }
    let sq = delta.sqrt_hinted(hints.sqrt_delta);
    Ok(((-b1 + sq) / (2.0 * a1), (-b1 - sq) / (2.0 * a1)))
}

/// `K = -K_minus = (b1 + sqrt(Delta)) / (2 a1)`, generic over the scalar.
pub fn level_k_generic<T: CScalar>(
    q1: T,
    z: &[T; 4],
    k: T,
    pp: &PhysParams,
    hints: &BranchHints,
) -> T {
    let (a1, b1, c1) = level_quadratic(q1, z[0], z[1], z[2], z[3], k, pp, hints);
    let delta = b1 * b1 - T::from_f64(4.0) * a1 * c1;
    let sq = delta.sqrt_hinted(hints.sqrt_delta);
    (b1 + sq) / (T::from_f64(2.0) * a1)
}

/// The reduced-order Hamiltonian field
/// `(dK/dp2, dK/dp3, -dK/dq2, -dK/dq3)` at a transverse point, `q1` fixed.
pub fn whittaker_field(
    ts: &TransverseState,
    q1: C64,
    m: &MassParameters,
    k: C64,
    hints: &BranchHints,
) -> Result<[C64; 4], Error> {
    let pp = PhysParams::of(m);
    let z = [ts.q2, ts.q3, ts.p2, ts.p3];
    let grad = crate::numeric::dual::gradient(
        |zz: &[Dual<C64>]| {
            let arr = [zz[0], zz[1], zz[2], zz[3]];
            level_k_generic(Dual::constant(q1), &arr, Dual::constant(k), &pp, hints)
        },
        &z,
    );
    Ok([grad[2], grad[3], -grad[0], -grad[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::orbit::OrbitContext;
    use crate::exactalg::{rat, ratio};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ctx(a: (i64, i64), b: (i64, i64)) -> OrbitContext {
        let m = MassParameters::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap();
        OrbitContext::new(m, rat(1)).unwrap()
    }

    fn transverse(s: &crate::dynamics::hamiltonians::ReducedState) -> TransverseState {
        TransverseState {
            q2: s.q2,
            q3: s.q3,
            p2: s.p2,
            p3: s.p3,
        }
    }

    #[test]
    fn kminus_matches_orbit_momentum_at_origin() {
        let ctx = ctx((1, 1), (1, 1));
        let s = ctx.lagrange_orbit(c(0.0, 0.0)).unwrap();
        let hints = ctx.hints_at(c(0.0, 0.0)).unwrap();
        let (_, kminus) =
            p1_branch(&transverse(&s), s.q1, &ctx.masses, s.k, &hints).unwrap();
        assert!(kminus.norm() < 1e-13, "K_minus = {kminus}, orbit p1 = 0");
    }

    #[test]
    fn kminus_tracks_orbit_momentum_along_the_curve() {
        let ctx = ctx((1, 2), (1, 1));
        for j in 0..10 {
            let ang = 2.0 * std::f64::consts::PI * (j as f64 + 0.3) / 10.0;
            let w = 1.2 * c(ang.cos(), ang.sin());
            if !ctx.is_regular(w) {
                continue;
            }
            let s = ctx.lagrange_orbit(w).unwrap();
            let hints = ctx.hints_at(w).unwrap();
            let (_, kminus) =
                p1_branch(&transverse(&s), s.q1, &ctx.masses, s.k, &hints).unwrap();
            assert!(
                (kminus - s.p1).norm() < 1e-12,
                "branch selection failed at w = {w}: {kminus} vs {}",
                s.p1
            );
        }
    }

    #[test]
    fn vieta_relations() {
        let ctx = ctx((2, 5), (4, 5));
        let w = c(0.8, 0.4);
        let s = ctx.lagrange_orbit(w).unwrap();
        let hints = ctx.hints_at(w).unwrap();
        let ts = transverse(&s);
        let (kplus, kminus) = p1_branch(&ts, s.q1, &ctx.masses, s.k, &hints).unwrap();
        let pp = PhysParams::of(&ctx.masses);
        let (a1, b1, c1) = level_quadratic(s.q1, ts.q2, ts.q3, ts.p2, ts.p3, s.k, &pp, &hints);
        assert!((kplus + kminus + b1 / a1).norm() < 1e-12);
        assert!((kplus * kminus - c1 / a1).norm() < 1e-12);
        // distinct roots away from branch points
        assert!((kplus - kminus).norm() > 1e-6);
    }

    #[test]
    fn field_is_tangent_to_the_orbit() {
        // along the curve, d(q2,q3,p2,p3)/dq1 from the parametrization must
        // reproduce the reduced-order field
        for ctx in [ctx((1, 1), (1, 1)), ctx((1, 10), (1, 5))] {
            for w in [c(0.35, 0.1), c(-0.6, 0.45)] {
                if !ctx.is_regular(w) {
                    continue;
                }
                let s = ctx.lagrange_orbit(w).unwrap();
                let hints = ctx.hints_at(w).unwrap();
                let field =
                    whittaker_field(&transverse(&s), s.q1, &ctx.masses, s.k, &hints).unwrap();
                let tangent = ctx.orbit_time_derivative(w).unwrap();
                let v = tangent[0]; // dq1/dt
                let expected = [
                    tangent[1] / v,
                    tangent[2] / v,
                    tangent[4] / v,
                    tangent[5] / v,
                ];
                for i in 0..4 {
                    assert!(
                        (field[i] - expected[i]).norm() < 1e-9,
                        "tangency defect in component {i} at w = {w}: {} vs {}",
                        field[i],
                        expected[i]
                    );
                }
            }
        }
    }

    #[test]
    fn field_is_holomorphic_near_regular_points() {
        // Cauchy-Riemann via finite differences in two directions
        let ctx = ctx((1, 1), (1, 1));
        let w = c(0.5, 0.3);
        let s = ctx.lagrange_orbit(w).unwrap();
        let hints = ctx.hints_at(w).unwrap();
        let h = 1e-6;
        let f = |dq2: C64| {
            let ts = TransverseState {
                q2: s.q2 + dq2,
                q3: s.q3,
                p2: s.p2,
                p3: s.p3,
            };
            whittaker_field(&ts, s.q1, &ctx.masses, s.k, &hints).unwrap()[0]
        };
        let d_re = (f(c(h, 0.0)) - f(c(-h, 0.0))) / (2.0 * h);
        let d_im = (f(c(0.0, h)) - f(c(0.0, -h))) / c(0.0, 2.0 * h);
        assert!(
            (d_re - d_im).norm() < 1e-8,
            "Cauchy-Riemann defect {}",
            (d_re - d_im).norm()
        );
    }

    #[test]
    fn branches_are_distinct_fields() {
        let ctx = ctx((1, 1), (1, 1));
        let w = c(0.4, 0.2);
        let s = ctx.lagrange_orbit(w).unwrap();
        let mut hints = ctx.hints_at(w).unwrap();
        let minus_field =
            whittaker_field(&transverse(&s), s.q1, &ctx.masses, s.k, &hints).unwrap();
        hints.sqrt_delta = -hints.sqrt_delta;
        let plus_field =
            whittaker_field(&transverse(&s), s.q1, &ctx.masses, s.k, &hints).unwrap();
        let diff: f64 = (0..4)
            .map(|i| (minus_field[i] - plus_field[i]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff > 1e-6, "branch fields coincide unexpectedly");
    }
}
