//! Variational systems along the parabolic orbit: the full 6x6
//! linearization, the 4x4 normal variational system in the orbit parameter,
//! and its gauge transform to the rank-one-pole form that the exact residue
//! layer is checked against.

use num_complex::Complex64;

use crate::model::MassParameters;
use crate::numeric::cmatrix::CMat;
use crate::numeric::dual::{hessian, Dual};
use crate::numeric::rk45;
use crate::Error;

use super::hamiltonians::{reduced_h_generic, BranchHints, PhysParams};
use super::orbit::OrbitContext;
use super::whittaker::level_k_generic;

type C64 = Complex64;

/// Hessian of the reduced-order Hamiltonian `K` in `(q2, q3, p2, p3)` at
/// the orbit point with parameter `w`.
fn level_k_hessian(ctx: &OrbitContext, w: C64) -> Result<Vec<Vec<C64>>, Error> {
    if !ctx.is_regular(w) {
        return Err(Error::Domain(format!("w = {w} is a singular parameter value")));
    }
    let s = ctx.lagrange_orbit(w)?;
    let hints = ctx.hints_at(w)?;
    let pp = ctx.phys;
    let k = s.k;
    let z = [s.q2, s.q3, s.p2, s.p3];
    Ok(hessian(
        |zz: &[Dual<Dual<C64>>]| {
            let arr = [zz[0], zz[1], zz[2], zz[3]];
            level_k_generic(
                Dual::constant(Dual::constant(s.q1)),
                &arr,
                Dual::constant(Dual::constant(k)),
                &pp,
                &hints,
            )
        },
        &z,
    ))
}

/// The 4x4 normal variational matrix in the orbit parameter `w`: the
/// linearization of the reduced-order flow, times `dq1/dw`.
///
/// Variational ordering `(dq2, dq3, dp2, dp3)`, block layout
/// `[[M3^T, M2], [-M1, -M3]]` with `M1` symmetric and `M2` scalar.
pub fn nve_matrix(ctx: &OrbitContext, w: C64) -> Result<CMat, Error> {
    let h = level_k_hessian(ctx, w)?;
    let dqdw = ctx.dq_dw(w);
    let mut m = CMat::zeros(4, 4);
    // field (K_p2, K_p3, -K_q2, -K_q3); rows of the Jacobian in z-order
    for col in 0..4 {
        m[(0, col)] = dqdw * h[2][col];
        m[(1, col)] = dqdw * h[3][col];
        m[(2, col)] = -dqdw * h[0][col];
        m[(3, col)] = -dqdw * h[1][col];
    }
    Ok(m)
}

/// Independent finite-difference backend for the same matrix: central
/// differences of the reduced-order field with one Richardson level.
pub fn nve_matrix_fd(ctx: &OrbitContext, w: C64) -> Result<CMat, Error> {
    if !ctx.is_regular(w) {
        return Err(Error::Domain(format!("w = {w} is a singular parameter value")));
    }
    let s = ctx.lagrange_orbit(w)?;
    let hints = ctx.hints_at(w)?;
    let base = [s.q2, s.q3, s.p2, s.p3];
    let field = |z: &[C64; 4]| -> Result<[C64; 4], Error> {
        let ts = super::hamiltonians::TransverseState {
            q2: z[0],
            q3: z[1],
            p2: z[2],
            p3: z[3],
        };
        super::whittaker::whittaker_field(&ts, s.q1, &ctx.masses, s.k, &hints)
    };
    let jac_at_step = |h: f64| -> Result<CMat, Error> {
        let mut m = CMat::zeros(4, 4);
        for col in 0..4 {
            let mut zp = base;
            let mut zm = base;
            zp[col] += C64::new(h, 0.0);
            zm[col] -= C64::new(h, 0.0);
            let fp = field(&zp)?;
            let fm = field(&zm)?;
            for row in 0..4 {
                m[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        Ok(m)
    };
    let d1 = jac_at_step(1e-6)?;
    let d2 = jac_at_step(5e-7)?;
    // one Richardson extrapolation level: (4 D(h/2) - D(h)) / 3
    let refined = d2.scale(C64::new(4.0 / 3.0, 0.0)).sub(&d1.scale(C64::new(1.0 / 3.0, 0.0)));
    Ok(refined.scale(ctx.dq_dw(w)))
}

/// Closed-form value of the scalar in the `M2` block:
/// `4 S1 Z(w) / (S2 S3^3 m1^4 m2 m3)`.
pub fn m2_block_scalar(ctx: &OrbitContext, w: C64) -> C64 {
    let s1 = ctx.consts.s1.eval();
    let s2 = ctx.consts.s2.eval();
    let s3 = ctx.consts.s3.eval();
    let m1 = C64::new(ctx.phys.m1, 0.0);
    let m2 = C64::new(ctx.phys.m2, 0.0);
    4.0 * s1 * ctx.z_at(w) / (s2 * s3 * s3 * s3 * m1.powu(4) * m2 * ctx.phys.m3)
}

/// Full 6x6 variational matrix `J H_zz` along the orbit, plus the gradient
/// `H_z` there (the coefficient vector of the linear first integral).
pub fn variational_full(ctx: &OrbitContext, w: C64) -> Result<(CMat, [C64; 6]), Error> {
    if !ctx.is_regular(w) {
        return Err(Error::Domain(format!("w = {w} is a singular parameter value")));
    }
    let s = ctx.lagrange_orbit(w)?;
    let hints = ctx.hints_at(w)?;
    let pp = ctx.phys;
    let z = [s.q1, s.q2, s.q3, s.p1, s.p2, s.p3];
    let h = hessian(
        |zz: &[Dual<Dual<C64>>]| {
            reduced_h_generic(
                zz[0],
                zz[1],
                zz[2],
                zz[3],
                zz[4],
                zz[5],
                Dual::constant(Dual::constant(s.k)),
                &pp,
                &hints,
            )
        },
        &z,
    );
    // symplectic pairing for ordering (q1,q2,q3,p1,p2,p3)
    let mut jh = CMat::zeros(6, 6);
    for col in 0..6 {
        for row in 0..3 {
            jh[(row, col)] = h[row + 3][col];
            jh[(row + 3, col)] = -h[row][col];
        }
    }
    let field = super::hamiltonians::reduced_vector_field_hinted(&s, &ctx.masses, &hints)?;
    // H_z = (dH/dq, dH/dp) = (-field[3..6], field[0..3])
    let grad = [
        -field[3], -field[4], -field[5], field[0], field[1], field[2],
    ];
    Ok((jh, grad))
}

/// Drift of the linear first integral `F = <zeta, H_z(Gamma)>` when the
/// full variational system is integrated over a short parameter interval.
pub fn f_integral_drift(
    ctx: &OrbitContext,
    w0: C64,
    w1: C64,
    zeta0: [C64; 6],
) -> Result<f64, Error> {
    let f_at = |w: C64, zeta: &[C64]| -> Result<C64, Error> {
        let (_, grad) = variational_full(ctx, w)?;
        Ok((0..6).map(|i| zeta[i] * grad[i]).sum())
    };
    let f0 = f_at(w0, &zeta0)?;
    let path = move |s: f64| w0 + (w1 - w0) * s;
    let ctx2 = ctx.clone();
    let rhs = move |s: f64, y: &[C64]| -> Vec<C64> {
        let w = path(s);
        let (jh, _) = variational_full(&ctx2, w).expect("regular path");
        // dt/dw = (dq/dw) / (dq/dt)
        let st = ctx2.lagrange_orbit(w).expect("regular path");
        let dtdw = ctx2.dq_dw(w) / ctx2.dq_dt(&st);
        let dw = w1 - w0;
        jh.mul_vec(y).iter().map(|v| v * dtdw * dw).collect()
    };
    let end = rk45::integrate(rhs, 0.0, 1.0, zeta0.to_vec(), 1e-12, 1e-12)?;
    let f1 = f_at(w1, &end)?;
    Ok((f1 - f0).norm())
}

/// Gauge transform of the normal variational system to the variables in
/// which the coefficient matrix has simple poles only: with
/// `c = L(w) Z(w)` and diag gauge `(c, c, 1, 1)`,
/// `Phi = C^-1 A C - C^-1 dC/dw`. With the angular momentum normalized
/// to 1 the parameter plane is already the pole plane (`w = t`).
pub fn fuchsian_transform(m: &MassParameters, t: C64) -> Result<CMat, Error> {
    let ctx = OrbitContext::new(m.clone(), crate::exactalg::rat(1))?;
    fuchsian_transform_in(&ctx, t)
}

/// Same as [`fuchsian_transform`] with a caller-provided context (must have
/// been built with unit angular momentum).
pub fn fuchsian_transform_in(ctx: &OrbitContext, t: C64) -> Result<CMat, Error> {
    let a = nve_matrix(ctx, t)?;
    let c = ctx.l_at(t) * ctx.z_at(t);
    let dc = ctx.l1 * ctx.z_at(t) + ctx.l_at(t) * (2.0 * ctx.z1 * t + ctx.z2);
    let ratio = dc / c;
    let mut out = CMat::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let scale = match (i < 2, j < 2) {
                (true, true) | (false, false) => C64::new(1.0, 0.0),
                (true, false) => c.inv(),  // row scaled by 1/c, momentum column
                (false, true) => c,
            };
            out[(i, j)] = a[(i, j)] * scale;
        }
    }
    out[(0, 0)] -= ratio;
    out[(1, 1)] -= ratio;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ctx(a: (i64, i64), b: (i64, i64)) -> OrbitContext {
        let m = MassParameters::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap();
        OrbitContext::new(m, rat(1)).unwrap()
    }

    #[test]
    fn momentum_block_matches_closed_form_at_origin() {
        let ctx = ctx((1, 1), (1, 1));
        let m = nve_matrix(&ctx, c(0.0, 0.0)).unwrap();
        // scalar block: entries (1,3) and (2,4) in 1-based indexing
        assert!((m[(0, 2)] - c(4.0 / 9.0, 0.0)).norm() < 1e-10, "{:?}", m[(0, 2)]);
        assert!((m[(1, 3)] - c(4.0 / 9.0, 0.0)).norm() < 1e-10);
        assert!(m[(0, 3)].norm() < 1e-10);
        assert!(m[(1, 2)].norm() < 1e-10);
    }

    #[test]
    fn momentum_block_is_scalar_everywhere() {
        for ctxx in [ctx((1, 2), (1, 1)), ctx((1, 10), (1, 5))] {
            for w in [c(0.45, 0.3), c(-0.8, 0.6)] {
                let m = nve_matrix(&ctxx, w).unwrap();
                let expected = m2_block_scalar(&ctxx, w);
                assert!((m[(0, 2)] - expected).norm() < 1e-9 * (1.0 + expected.norm()));
                assert!((m[(1, 3)] - expected).norm() < 1e-9 * (1.0 + expected.norm()));
                assert!(m[(0, 3)].norm() < 1e-9);
                assert!(m[(1, 2)].norm() < 1e-9);
            }
        }
    }

    #[test]
    fn block_structure_and_symmetry() {
        let ctx = ctx((1, 2), (1, 1));
        let w = c(0.4, 0.25);
        let m = nve_matrix(&ctx, w).unwrap();
        // lower-left block is -M1 with M1 symmetric
        assert!((m[(2, 1)] - m[(3, 0)]).norm() < 1e-9);
        // upper-left block is the transpose-negative of the lower-right
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (m[(i, j)] + m[(2 + j, 2 + i)]).norm() < 1e-9,
                    "transpose pairing defect at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn two_differentiation_backends_agree() {
        let ctx = ctx((1, 1), (1, 1));
        for w in [c(0.3, 0.2), c(-0.5, 0.7)] {
            let a = nve_matrix(&ctx, w).unwrap();
            let b = nve_matrix_fd(&ctx, w).unwrap();
            let dev = a.sub(&b).norm() / a.norm();
            assert!(dev < 1e-6, "backend disagreement {dev} at w = {w}");
        }
    }

    #[test]
    fn full_variational_matrix_properties() {
        let ctx = ctx((1, 1), (1, 1));
        let w = c(0.35, 0.15);
        let (jh, grad) = variational_full(&ctx, w).unwrap();
        // trace of J H_zz vanishes (Hamiltonian flows are divergence-free)
        assert!(jh.trace().norm() < 1e-11);
        // Hessian symmetry shows up as pairing: (J H)^T J + J (J H) ... check
        // directly instead: H = -J (J H) must be symmetric
        let mut h = CMat::zeros(6, 6);
        for col in 0..6 {
            for row in 0..3 {
                h[(row, col)] = -jh[(row + 3, col)];
                h[(row + 3, col)] = jh[(row, col)];
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                assert!((h[(i, j)] - h[(j, i)]).norm() < 1e-12, "Hessian asymmetry");
            }
        }
        // gradient is nonzero along the orbit (the curve is non-stationary)
        assert!(grad.iter().map(|g| g.norm()).sum::<f64>() > 1e-3);
    }

    #[test]
    fn linear_first_integral_is_conserved() {
        let ctx = ctx((1, 1), (1, 1));
        let zeta0 = [
            c(0.3, 0.1),
            c(-0.2, 0.4),
            c(0.5, -0.3),
            c(0.1, 0.2),
            c(-0.4, 0.1),
            c(0.2, 0.3),
        ];
        let drift = f_integral_drift(&ctx, c(0.3, 0.1), c(0.45, 0.22), zeta0).unwrap();
        assert!(drift < 1e-10, "first-integral drift {drift}");
    }

    #[test]
    fn gauge_transform_is_finite_away_from_poles() {
        let ctx = ctx((1, 2), (1, 1));
        let sp = crate::model::singular_points(&ctx.masses, &rat(1)).unwrap();
        let t0 = sp.t0.eval();
        // a ring of regular points around the pole cluster stays bounded
        for j in 0..24 {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / 24.0;
            let t = t0 + 0.9 * c(ang.cos(), ang.sin());
            let m = fuchsian_transform(&ctx.masses, t).unwrap();
            assert!(m.norm() < 1e3, "unexpected blow-up at {t}");
        }
    }
}
