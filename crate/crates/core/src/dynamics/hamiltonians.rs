//! The three Hamiltonians of the reduction chain and the two canonical
//! transformations connecting them, plus their closed-form vector field.
//!
//! Everything numeric here is generic over [`CScalar`], so the same
//! expressions serve plain evaluation, gradients and Hessians through the
//! dual-number layer. Square roots of complex quantities carry explicit
//! branch hints; at real physical configurations the hints reduce to the
//! principal branch.

use num_complex::Complex64;

use crate::model::MassParameters;
use crate::numeric::dual::{CScalar, Dual};
use crate::Error;

type C64 = Complex64;

/// Positions/momenta of all three bodies: `(x1,x2)` body 1, `(x3,x4)`
/// body 2, `(x5,x6)` body 3, with `y_r` the conjugate momenta.
#[derive(Clone, Debug, PartialEq)]
pub struct FullState {
    pub x: [C64; 6],
    pub y: [C64; 6],
}

/// Relative coordinates: `(l1,l2)` body 1 and `(l3,l4)` body 2 relative to
/// body 3, `(l5,l6)` body 3 in the fixed frame; `g` the conjugate momenta.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeState {
    pub l: [C64; 6],
    pub g: [C64; 6],
}

/// Rotating-frame coordinates after elimination of the ignorable angle:
/// `q1` the body3-body1 distance, `q2`/`q3` the projections of body 2,
/// `p4 = k` the angular momentum (a constant of motion).
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedState {
    pub q1: C64,
    pub q2: C64,
    pub q3: C64,
    pub p1: C64,
    pub p2: C64,
    pub p3: C64,
    pub k: C64,
}

/// The transverse variables of the energy-level reduction (`q1` is time).
#[derive(Clone, Debug, PartialEq)]
pub struct TransverseState {
    pub q2: C64,
    pub q3: C64,
    pub p2: C64,
    pub p3: C64,
}

/// Masses in double precision plus the reciprocal combinations.
#[derive(Clone, Copy, Debug)]
pub struct PhysParams {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    /// 1/m1 + 1/m3
    pub big_m1: f64,
    /// 1/m2 + 1/m3
    pub big_m2: f64,
}

impl PhysParams {
    pub fn of(m: &MassParameters) -> Self {
        let m1 = crate::exactalg::rational_to_f64(m.alpha());
        let m2 = crate::exactalg::rational_to_f64(m.beta());
        let m3 = 1.0;
        Self {
            m1,
            m2,
            m3,
            big_m1: 1.0 / m1 + 1.0 / m3,
            big_m2: 1.0 / m2 + 1.0 / m3,
        }
    }
}

/// Branch hints for the square roots in the reduced Hamiltonian and the
/// energy-level root. `r2`/`r3` are the intended values of the mutual
/// distances; `sqrt_delta` the intended value of the discriminant root.
#[derive(Clone, Copy, Debug)]
pub struct BranchHints {
    pub r2: C64,
    pub r3: C64,
    pub sqrt_delta: C64,
}

impl BranchHints {
    /// Principal-branch hints evaluated at a base point.
    pub fn principal(q1: C64, q2: C64, q3: C64) -> Self {
        Self {
            r2: (q2 * q2 + q3 * q3).sqrt(),
            r3: ((q1 - q2) * (q1 - q2) + q3 * q3).sqrt(),
            sqrt_delta: C64::new(0.0, 0.0), // set by branch-aware callers
        }
    }
}

fn guard_distance(r: C64, what: &str) -> Result<(), Error> {
    if r.norm() < 1e-12 {
        return Err(Error::Domain(format!("collision configuration: {what} vanishes")));
    }
    Ok(())
}

/// Full 6-degree Hamiltonian: kinetic energy minus the Newtonian potential
/// (gravitational constant 1).
pub fn hamiltonian_full(s: &FullState, m: &MassParameters) -> Result<C64, Error> {
    let pp = PhysParams::of(m);
    let (x, y) = (&s.x, &s.y);
    let kin = (y[0] * y[0] + y[1] * y[1]) / (2.0 * pp.m1)
        + (y[2] * y[2] + y[3] * y[3]) / (2.0 * pp.m2)
        + (y[4] * y[4] + y[5] * y[5]) / (2.0 * pp.m3);
    let r23 = ((x[2] - x[4]) * (x[2] - x[4]) + (x[3] - x[5]) * (x[3] - x[5])).sqrt();
    let r13 = ((x[4] - x[0]) * (x[4] - x[0]) + (x[5] - x[1]) * (x[5] - x[1])).sqrt();
    let r12 = ((x[0] - x[2]) * (x[0] - x[2]) + (x[1] - x[3]) * (x[1] - x[3])).sqrt();
    guard_distance(r23, "r23")?;
    guard_distance(r13, "r13")?;
    guard_distance(r12, "r12")?;
    Ok(kin - pp.m3 * pp.m2 / r23 - pp.m3 * pp.m1 / r13 - pp.m1 * pp.m2 / r12)
}

/// Relative-coordinate reduction generated by
/// `W1 = y1 l1 + y2 l2 + y3 l3 + y4 l4 + (y1+y3+y5) l5 + (y2+y4+y6) l6`.
pub fn reduce_relative(s: &FullState) -> RelativeState {
    let (x, y) = (&s.x, &s.y);
    RelativeState {
        l: [
            x[0] - x[4],
            x[1] - x[5],
            x[2] - x[4],
            x[3] - x[5],
            x[4],
            x[5],
        ],
        g: [
            y[0],
            y[1],
            y[2],
            y[3],
            y[0] + y[2] + y[4],
            y[1] + y[3] + y[5],
        ],
    }
}

/// Inverse of [`reduce_relative`]; the round trip is the identity.
pub fn relative_to_full(s: &RelativeState) -> FullState {
    let (l, g) = (&s.l, &s.g);
    FullState {
        x: [
            l[0] + l[4],
            l[1] + l[5],
            l[2] + l[4],
            l[3] + l[5],
            l[4],
            l[5],
        ],
        y: [
            g[0],
            g[1],
            g[2],
            g[3],
            g[4] - g[0] - g[2],
            g[5] - g[1] - g[3],
        ],
    }
}

/// The constant 12x12 Jacobian of the relative reduction, ordered
/// `(x1..x6, y1..y6) -> (l1..l6, g1..g6)`.
pub fn relative_jacobian() -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; 12]; 12];
    // l-block: l1 = x1 - x5, l2 = x2 - x6, l3 = x3 - x5, l4 = x4 - x6, l5 = x5, l6 = x6
    m[0][0] = 1.0;
    m[0][4] = -1.0;
    m[1][1] = 1.0;
    m[1][5] = -1.0;
    m[2][2] = 1.0;
    m[2][4] = -1.0;
    m[3][3] = 1.0;
    m[3][5] = -1.0;
    m[4][4] = 1.0;
    m[5][5] = 1.0;
    // g-block: g1..g4 = y1..y4, g5 = y1 + y3 + y5, g6 = y2 + y4 + y6
    for r in 0..4 {
        m[6 + r][6 + r] = 1.0;
    }
    m[10][6] = 1.0;
    m[10][8] = 1.0;
    m[10][10] = 1.0;
    m[11][7] = 1.0;
    m[11][9] = 1.0;
    m[11][11] = 1.0;
    m
}

/// The 4-degree Hamiltonian in relative coordinates (center-of-mass frame).
pub fn hamiltonian_relative(s: &RelativeState, m: &MassParameters) -> Result<C64, Error> {
    let pp = PhysParams::of(m);
    let (l, g) = (&s.l, &s.g);
    let rho1 = (l[2] * l[2] + l[3] * l[3]).sqrt();
    let rho2 = (l[0] * l[0] + l[1] * l[1]).sqrt();
    let rho3 = ((l[0] - l[2]) * (l[0] - l[2]) + (l[1] - l[3]) * (l[1] - l[3])).sqrt();
    guard_distance(rho1, "rho1")?;
    guard_distance(rho2, "rho2")?;
    guard_distance(rho3, "rho3")?;
    Ok(
        pp.big_m1 / 2.0 * (g[0] * g[0] + g[1] * g[1])
            + pp.big_m2 / 2.0 * (g[2] * g[2] + g[3] * g[3])
            + (g[0] * g[2] + g[1] * g[3]) / pp.m3
            - pp.m3 * pp.m2 / rho1
            - pp.m1 * pp.m3 / rho2
            - pp.m1 * pp.m2 / rho3,
    )
}

/// Rotating-frame reduction generated by
/// `W2 = g1 q1 cos q4 + g2 q1 sin q4 + g3 (q2 cos q4 - q3 sin q4)
///       + g4 (q2 sin q4 + q3 cos q4)`.
///
/// Restricted to real phase points (the angle `q4` is recovered by
/// `atan2`); returns the reduced state (with `k = p4`) and `q4`.
pub fn reduce_rotating(s: &RelativeState) -> Result<(ReducedState, f64), Error> {
    let max_im = s
        .l
        .iter()
        .chain(s.g.iter())
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    if max_im > 1e-12 {
        return Err(Error::Domain(
            "rotating reduction needs a real phase point (the angle is multivalued otherwise)"
                .into(),
        ));
    }
    let (l, g) = (&s.l, &s.g);
    let q1_sq = l[0].re * l[0].re + l[1].re * l[1].re;
    if q1_sq < 1e-24 {
        return Err(Error::Domain("l1 = l2 = 0: rotation angle undefined".into()));
    }
    let q1 = q1_sq.sqrt();
    let q4 = l[1].re.atan2(l[0].re);
    let (c, sn) = (q4.cos(), q4.sin());
    let q2 = l[2].re * c + l[3].re * sn;
    let q3 = -l[2].re * sn + l[3].re * c;
    let p1 = g[0].re * c + g[1].re * sn;
    let p2 = g[2].re * c + g[3].re * sn;
    let p3 = -g[2].re * sn + g[3].re * c;
    // perpendicular momentum of body 1 folds into the angular momentum
    let g_perp = -g[0].re * sn + g[1].re * c;
    let p4 = q1 * g_perp + q2 * p3 - q3 * p2;
    let re = |x: f64| C64::new(x, 0.0);
    Ok((
        ReducedState {
            q1: re(q1),
            q2: re(q2),
            q3: re(q3),
            p1: re(p1),
            p2: re(p2),
            p3: re(p3),
            k: re(p4),
        },
        q4,
    ))
}

/// Inverse of [`reduce_rotating`] for a given angle.
pub fn rotating_to_relative(s: &ReducedState, q4: f64) -> RelativeState {
    let (c, sn) = (q4.cos(), q4.sin());
    let g_perp = (s.k - s.q2 * s.p3 + s.q3 * s.p2) / s.q1;
    RelativeState {
        l: [
            s.q1 * c,
            s.q1 * sn,
            s.q2 * c - s.q3 * sn,
            s.q2 * sn + s.q3 * c,
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ],
        g: [
            s.p1 * c - g_perp * sn,
            s.p1 * sn + g_perp * c,
            s.p2 * c - s.p3 * sn,
            s.p2 * sn + s.p3 * c,
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    }
}

/// The reduced Hamiltonian, generic over the scalar so the dual layer can
/// differentiate through it. `p_ang = p3 q2 - p2 q3 - k`.
pub fn reduced_h_generic<T: CScalar>(
    q1: T,
    q2: T,
    q3: T,
    p1: T,
    p2: T,
    p3: T,
    k: T,
    pp: &PhysParams,
    hints: &BranchHints,
) -> T {
    let half_m1 = T::from_f64(pp.big_m1 / 2.0);
    let half_m2 = T::from_f64(pp.big_m2 / 2.0);
    let inv_m3 = T::from_f64(1.0 / pp.m3);
    let p_ang = p3 * q2 - p2 * q3 - k;
    let r2 = (q2 * q2 + q3 * q3).sqrt_hinted(hints.r2);
    let r3 = ((q1 - q2) * (q1 - q2) + q3 * q3).sqrt_hinted(hints.r3);
    half_m1 * (p1 * p1 + (p_ang / q1) * (p_ang / q1))
        + half_m2 * (p2 * p2 + p3 * p3)
        + inv_m3 * (p1 * p2 - p3 * p_ang / q1)
        - T::from_f64(pp.m1 * pp.m3) / q1
        - T::from_f64(pp.m3 * pp.m2) / r2
        - T::from_f64(pp.m1 * pp.m2) / r3
}

/// Reduced Hamiltonian at a phase point (principal distance branches).
pub fn hamiltonian_reduced(s: &ReducedState, m: &MassParameters) -> Result<C64, Error> {
    let pp = PhysParams::of(m);
    let hints = BranchHints::principal(s.q1, s.q2, s.q3);
    guard_distance(s.q1, "q1")?;
    guard_distance(hints.r2, "r2")?;
    guard_distance(hints.r3, "r3")?;
    Ok(reduced_h_generic(
        s.q1, s.q2, s.q3, s.p1, s.p2, s.p3, s.k, &pp, &hints,
    ))
}

/// Closed-form Hamiltonian vector field `(dH/dp, -dH/dq)` of the reduced
/// system, with the distance branches pinned by `hints`.
pub fn reduced_vector_field_hinted(
    s: &ReducedState,
    m: &MassParameters,
    hints: &BranchHints,
) -> Result<[C64; 6], Error> {
    let pp = PhysParams::of(m);
    guard_distance(s.q1, "q1")?;
    let p_ang = s.p3 * s.q2 - s.p2 * s.q3 - s.k;
    let r2 = (s.q2 * s.q2 + s.q3 * s.q3).sqrt_hinted(hints.r2);
    let r3 = ((s.q1 - s.q2) * (s.q1 - s.q2) + s.q3 * s.q3).sqrt_hinted(hints.r3);
    guard_distance(r2, "r2")?;
    guard_distance(r3, "r3")?;
    let (m1, m2, m3) = (pp.m1, pp.m2, pp.m3);
    let q1sq = s.q1 * s.q1;
    // common factor dH/dP
    let w = pp.big_m1 * p_ang / q1sq - s.p3 / (m3 * s.q1);
    let dp1 = pp.big_m1 * s.p1 + s.p2 / m3;
    let dp2 = pp.big_m2 * s.p2 + s.p1 / m3 - w * s.q3;
    let dp3 = pp.big_m2 * s.p3 + w * s.q2 - p_ang / (m3 * s.q1);
    let r2c = r2 * r2 * r2;
    let r3c = r3 * r3 * r3;
    let dq1 = -pp.big_m1 * p_ang * p_ang / (q1sq * s.q1)
        + s.p3 * p_ang / (m3 * q1sq)
        + m1 * m3 / q1sq
        + m1 * m2 * (s.q1 - s.q2) / r3c;
    let dq2 = w * s.p3 + m3 * m2 * s.q2 / r2c - m1 * m2 * (s.q1 - s.q2) / r3c;
    let dq3 = -w * s.p2 + m3 * m2 * s.q3 / r2c + m1 * m2 * s.q3 / r3c;
    Ok([dp1, dp2, dp3, -dq1, -dq2, -dq3])
}

/// Closed-form vector field at a point, principal branches; cross-validated
/// against the dual-number gradient in tests.
pub fn reduced_vector_field(s: &ReducedState, m: &MassParameters) -> Result<[C64; 6], Error> {
    let hints = BranchHints::principal(s.q1, s.q2, s.q3);
    reduced_vector_field_hinted(s, m, &hints)
}

/// Largest entry of `M^T Omega M - Omega` for the constant Jacobian of the
/// relative reduction (ordering `(x, y) -> (l, g)`).
pub fn relative_symplectic_defect() -> f64 {
    let m = relative_jacobian();
    let omega = |i: usize, j: usize| -> f64 {
        if j == i + 6 {
            1.0
        } else if i == j + 6 {
            -1.0
        } else {
            0.0
        }
    };
    let mut worst = 0.0f64;
    for a in 0..12 {
        for b in 0..12 {
            let mut acc = 0.0;
            for i in 0..12 {
                for j in 0..12 {
                    acc += m[i][a] * omega(i, j) * m[j][b];
                }
            }
            worst = worst.max((acc - omega(a, b)).abs());
        }
    }
    worst
}

/// Largest entry of `M^T Omega M - Omega` for the rotating reduction at a
/// fixed generic real phase point, via dual-number differentiation of the
/// inverse map (the inverse of a symplectic map is symplectic).
pub fn rotating_symplectic_defect() -> f64 {
    let base: [f64; 8] = [1.3, 0.4, 0.8, 0.35, -0.2, 0.5, 0.7, 0.25]; // q1..q4, p1..p4
    let map = |z: &[Dual<C64>]| -> Vec<Dual<C64>> {
        let (q1, q2, q3, q4) = (z[0], z[1], z[2], z[3]);
        let (p1, p2, p3, p4) = (z[4], z[5], z[6], z[7]);
        let c0 = base[3].cos();
        let s0 = base[3].sin();
        let dq4 = q4 - Dual::constant(C64::new(base[3], 0.0));
        // first-order expansion around the base angle is exact for the Jacobian
        let cosq = Dual::constant(C64::new(c0, 0.0)) - dq4 * Dual::from_f64(s0);
        let sinq = Dual::constant(C64::new(s0, 0.0)) + dq4 * Dual::from_f64(c0);
        let g_perp = (p4 - q2 * p3 + q3 * p2) / q1;
        vec![
            q1 * cosq,
            q1 * sinq,
            q2 * cosq - q3 * sinq,
            q2 * sinq + q3 * cosq,
            p1 * cosq - g_perp * sinq,
            p1 * sinq + g_perp * cosq,
            p2 * cosq - p3 * sinq,
            p2 * sinq + p3 * cosq,
        ]
    };
    let mut jac = [[0.0f64; 8]; 8];
    for col in 0..8 {
        let args: Vec<Dual<C64>> = base
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if i == col {
                    Dual::var(C64::new(v, 0.0))
                } else {
                    Dual::constant(C64::new(v, 0.0))
                }
            })
            .collect();
        let out = map(&args);
        for row in 0..8 {
            jac[row][col] = out[row].d.re;
        }
    }
    let omega = |i: usize, j: usize| -> f64 {
        if j == i + 4 {
            1.0
        } else if i == j + 4 {
            -1.0
        } else {
            0.0
        }
    };
    let mut worst = 0.0f64;
    for a in 0..8 {
        for b in 0..8 {
            let mut acc = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    acc += jac[i][a] * omega(i, j) * jac[j][b];
                }
            }
            worst = worst.max((acc - omega(a, b)).abs());
        }
    }
    worst
}

/// Gradient-based field `(dH/dp, -dH/dq)` via dual numbers (the
/// cross-check backend for [`reduced_vector_field`]).
pub fn reduced_vector_field_ad(
    s: &ReducedState,
    m: &MassParameters,
    hints: &BranchHints,
) -> Result<[C64; 6], Error> {
    let pp = PhysParams::of(m);
    guard_distance(s.q1, "q1")?;
    let z = [s.q1, s.q2, s.q3, s.p1, s.p2, s.p3];
    let grad = crate::numeric::dual::gradient(
        |zz: &[Dual<C64>]| {
            reduced_h_generic(
                zz[0],
                zz[1],
                zz[2],
                zz[3],
                zz[4],
                zz[5],
                Dual::constant(s.k),
                &pp,
                hints,
            )
        },
        &z,
    );
    Ok([grad[3], grad[4], grad[5], -grad[0], -grad[1], -grad[2]])
}
