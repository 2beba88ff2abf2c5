//! Monodromy of the pole system: analytic continuation of the fundamental
//! matrix along keyhole loops in the punctured plane, the group relation,
//! Jordan-structure detection and the spectrum comparison at infinity.
//!
//! All integrations run the embedded 5(4) pair at `1e-12` tolerance while
//! the acceptance gates sit at `1e-6`/`1e-8`, leaving several orders of
//! headroom for accumulation.

use num_complex::Complex64;

use crate::fuchsian::FuchsianSystem;
use crate::model::SpectralData;
use crate::numeric::cmatrix::CMat;
use crate::numeric::rk45;
use crate::numeric::{multiset_match_max_distance, polynomial_roots_polished};
use crate::Error;

type C64 = Complex64;

/// One smooth piece of a path: a straight segment or a circular arc.
#[derive(Clone, Debug)]
pub enum Piece {
    Line {
        from: C64,
        to: C64,
    },
    Arc {
        center: C64,
        radius: f64,
        from_ang: f64,
        to_ang: f64,
    },
}

impl Piece {
    /// Point and velocity at parameter `s` in [0, 1].
    fn at(&self, s: f64) -> (C64, C64) {
        match *self {
            Piece::Line { from, to } => (from + (to - from) * s, to - from),
            Piece::Arc {
                center,
                radius,
                from_ang,
                to_ang,
            } => {
                let ang = from_ang + (to_ang - from_ang) * s;
                let e = C64::new(ang.cos(), ang.sin());
                let z = center + radius * e;
                (z, C64::new(0.0, 1.0) * radius * (to_ang - from_ang) * e)
            }
        }
    }

    fn start(&self) -> C64 {
        self.at(0.0).0
    }

    fn end(&self) -> C64 {
        self.at(1.0).0
    }
}

/// A closed path with a base point and a clearance requirement.
#[derive(Clone, Debug)]
pub struct PathSpec {
    pub base: C64,
    pub pieces: Vec<Piece>,
    /// minimum admissible distance to any pole
    pub clearance: f64,
    pub counterclockwise: bool,
}

impl PathSpec {
    /// Validate closedness and pole clearance (densely sampled).
    pub fn validate(&self, poles: &[C64]) -> Result<(), Error> {
        let Some(first) = self.pieces.first() else {
            return Err(Error::Domain("empty path".into()));
        };
        if (first.start() - self.base).norm() > 1e-12 {
            return Err(Error::Domain("path does not start at the base point".into()));
        }
        let mut cursor = self.base;
        for p in &self.pieces {
            if (p.start() - cursor).norm() > 1e-12 {
                return Err(Error::Domain("path pieces are not contiguous".into()));
            }
            cursor = p.end();
        }
        if (cursor - self.base).norm() > 1e-12 {
            return Err(Error::Domain("path is not closed".into()));
        }
        for p in &self.pieces {
            for j in 0..=200 {
                let (z, _) = p.at(j as f64 / 200.0);
                for pole in poles {
                    if (z - pole).norm() < self.clearance {
                        return Err(Error::Domain(format!(
                            "path violates pole clearance at {z} (pole {pole})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Result of transporting the fundamental matrix around a closed path.
#[derive(Clone, Debug)]
pub struct Transport {
    pub matrix: CMat,
    /// `exp(integral of trace)` accumulated along the path (Abel identity)
    pub abel_det: C64,
}

/// Integrate the matrix equation along a closed path from the identity.
pub fn integrate_along(
    sys: &FuchsianSystem,
    path: &PathSpec,
    tol: f64,
) -> Result<Transport, Error> {
    let poles = [sys.points.t0_c(), sys.points.t1_c(), sys.points.t2_c()];
    path.validate(&poles)?;
    let mut state = vec![C64::new(0.0, 0.0); 17];
    for i in 0..4 {
        state[i * 4 + i] = C64::new(1.0, 0.0);
    }
    for piece in &path.pieces {
        state = rk45::integrate(
            |s, y| {
                let (z, dz) = piece.at(s);
                let m = sys.rhs(z).expect("validated path stays off poles");
                let sigma = CMat::from_flat(4, 4, y[..16].to_vec());
                let mut out = m.matmul(&sigma).scale(dz).flat().to_vec();
                out.push(dz * sys.rhs_trace(z));
                out
            },
            0.0,
            1.0,
            state,
            tol,
            tol,
        )?;
    }
    Ok(Transport {
        matrix: CMat::from_flat(4, 4, state[..16].to_vec()),
        abel_det: state[16].exp(),
    })
}

/// Transport the fundamental matrix along an open straight segment
/// (clearance-checked against the poles).
pub fn transport_segment(
    sys: &FuchsianSystem,
    from: C64,
    to: C64,
    clearance: f64,
    tol: f64,
) -> Result<CMat, Error> {
    let poles = [sys.points.t0_c(), sys.points.t1_c(), sys.points.t2_c()];
    for j in 0..=200 {
        let z = from + (to - from) * (j as f64 / 200.0);
        for pole in poles {
            if (z - pole).norm() < clearance {
                return Err(Error::Domain(format!(
                    "segment violates pole clearance at {z}"
                )));
            }
        }
    }
    let mut state = vec![C64::new(0.0, 0.0); 16];
    for i in 0..4 {
        state[i * 4 + i] = C64::new(1.0, 0.0);
    }
    let state = rk45::integrate(
        |s, y| {
            let z = from + (to - from) * s;
            let m = sys.rhs(z).expect("segment stays off poles");
            let sigma = CMat::from_flat(4, 4, y.to_vec());
            m.matmul(&sigma).scale(to - from).flat().to_vec()
        },
        0.0,
        1.0,
        state,
        tol,
        tol,
    )?;
    Ok(CMat::from_flat(4, 4, state))
}

/// Which singular point a loop encircles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pole {
    T0,
    T1,
    T2,
    Infinity,
}

/// Keyhole loop around a finite pole: radial spoke from the base point,
/// full counterclockwise circle of radius `0.25 * gap`, spoke back. For the
/// point at infinity, a large clockwise circle around everything.
pub fn loop_path(sys: &FuchsianSystem, pole: Pole, base: C64) -> PathSpec {
    let gap = sys.points.min_gap();
    let clearance = 0.1 * gap;
    if pole == Pole::Infinity {
        let poles = [sys.points.t0_c(), sys.points.t1_c(), sys.points.t2_c()];
        let rmax = poles.iter().map(|p| (p - base).norm()).fold(0.0, f64::max);
        let radius = 4.0 * rmax + 2.0;
        // spoke points away from the pole cluster
        let centroid = (poles[0] + poles[1] + poles[2]) / 3.0;
        let dir = (base - centroid) / (base - centroid).norm();
        let entry = base + radius * dir;
        let ang0 = dir.im.atan2(dir.re);
        return PathSpec {
            base,
            pieces: vec![
                Piece::Line { from: base, to: entry },
                Piece::Arc {
                    center: base,
                    radius,
                    from_ang: ang0,
                    to_ang: ang0 - 2.0 * std::f64::consts::PI,
                },
                Piece::Line { from: entry, to: base },
            ],
            clearance,
            counterclockwise: false,
        };
    }
    let center = match pole {
        Pole::T0 => sys.points.t0_c(),
        Pole::T1 => sys.points.t1_c(),
        Pole::T2 => sys.points.t2_c(),
        Pole::Infinity => unreachable!(),
    };
    let radius = 0.25 * gap;
    let dir = (base - center) / (base - center).norm();
    let entry = center + radius * dir;
    let ang0 = dir.im.atan2(dir.re);
    PathSpec {
        base,
        pieces: vec![
            Piece::Line { from: base, to: entry },
            Piece::Arc {
                center,
                radius,
                from_ang: ang0,
                to_ang: ang0 + 2.0 * std::f64::consts::PI,
            },
            Piece::Line { from: entry, to: base },
        ],
        clearance,
        counterclockwise: true,
    }
}

/// Monodromy matrix of the standard loop around one singular point.
///
/// The common base point sits at `t0 - 1`, mirror-left of the vertical line
/// carrying all three poles: with counterclockwise keyholes and a clockwise
/// circle at infinity, that side makes the concatenation
/// `loop(t0) loop(t1) loop(t2) loop(inf)` contractible, i.e. the products
/// satisfy `T0 T1 T2 Tinf = I` in that order. (From the right-hand side the
/// same conventions produce the reversed order `T2 T1`.)
pub fn loop_monodromy(sys: &FuchsianSystem, pole: Pole, tol: f64) -> Result<Transport, Error> {
    integrate_along(sys, &loop_path(sys, pole, rep_base_point(sys)), tol)
}

/// The base point shared by all standard loops.
pub fn rep_base_point(sys: &FuchsianSystem) -> C64 {
    sys.points.t0_c() - 1.0
}

/// The full monodromy data from a common base point.
#[derive(Clone, Debug)]
pub struct MonodromyRep {
    pub t0: CMat,
    pub t1: CMat,
    pub t2: CMat,
    pub tinf: CMat,
    /// `|| T0 T1 T2 Tinf - I ||` in the recorded composition order
    pub relation_residual: f64,
    /// which product order reproduced the relation
    pub relation_order: &'static str,
    pub dets: [C64; 4],
    pub abel_dets: [C64; 4],
    pub tolerance: f64,
}

/// Compute all four loop matrices and verify the group relation. The
/// product order satisfied by the loop concatenation is detected
/// empirically; both candidate orders are formed and the best is recorded.
pub fn monodromy_rep(sys: &FuchsianSystem, tol: f64) -> Result<MonodromyRep, Error> {
    let tr0 = loop_monodromy(sys, Pole::T0, tol)?;
    let tr1 = loop_monodromy(sys, Pole::T1, tol)?;
    let tr2 = loop_monodromy(sys, Pole::T2, tol)?;
    let trinf = loop_monodromy(sys, Pole::Infinity, tol)?;
    let eye = CMat::identity(4);
    let forward = tr0
        .matrix
        .matmul(&tr1.matrix)
        .matmul(&tr2.matrix)
        .matmul(&trinf.matrix)
        .sub(&eye)
        .norm();
    let reversed = tr0
        .matrix
        .matmul(&tr2.matrix)
        .matmul(&tr1.matrix)
        .matmul(&trinf.matrix)
        .sub(&eye)
        .norm();
    let (relation_residual, relation_order) = if forward <= reversed {
        (forward, "t0*t1*t2*tinf")
    } else {
        (reversed, "t0*t2*t1*tinf")
    };
    Ok(MonodromyRep {
        dets: [
            tr0.matrix.det(),
            tr1.matrix.det(),
            tr2.matrix.det(),
            trinf.matrix.det(),
        ],
        abel_dets: [tr0.abel_det, tr1.abel_det, tr2.abel_det, trinf.abel_det],
        t0: tr0.matrix,
        t1: tr1.matrix,
        t2: tr2.matrix,
        tinf: trinf.matrix,
        relation_residual,
        relation_order,
        tolerance: tol,
    })
}

/// Jordan-block profile of a unipotent matrix from numerical ranks of the
/// powers of `T - I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanProfile {
    /// block sizes in decreasing order; sums to the dimension
    pub block_sizes: Vec<usize>,
    /// numerical ranks of (T - I)^j for j = 1, 2, 3
    pub ranks: Vec<usize>,
    /// a singular value fell inside the tolerance band
    pub indeterminate: bool,
}

/// Detect the Jordan profile of a (presumed unipotent) 4x4 matrix.
///
/// Rank thresholds scale like `tol * max(||N||_2, 1)^j`; a singular value
/// inside `(threshold/10, 10*threshold)` marks the result indeterminate
/// rather than silently passing.
pub fn unipotent_structure(t: &CMat, tol: f64) -> JordanProfile {
    let n = t.sub(&CMat::identity(4));
    let scale = n.singular_values()[0].max(1.0);
    let mut ranks = Vec::new();
    let mut indeterminate = false;
    let mut power = n.clone();
    for j in 1..=3i32 {
        let threshold = tol * scale.powi(j);
        let svs = power.singular_values();
        for &s in &svs {
            if s > threshold / 10.0 && s < threshold * 10.0 {
                indeterminate = true;
            }
        }
        ranks.push(svs.iter().filter(|&&s| s > threshold).count());
        power = power.matmul(&n);
    }
    // r[j] = rank(N^j); blocks of size >= j number r[j-1] - r[j]
    let r = [4usize, ranks[0], ranks[1], ranks[2], 0];
    let mut block_sizes = Vec::new();
    for j in (1..=4usize).rev() {
        let geq_j = r[j - 1].saturating_sub(r[j]);
        let geq_next = if j < 4 {
            r[j].saturating_sub(r[j + 1])
        } else {
            0
        };
        for _ in 0..geq_j.saturating_sub(geq_next) {
            block_sizes.push(j);
        }
    }
    block_sizes.sort_unstable_by(|a, b| b.cmp(a));
    JordanProfile {
        block_sizes,
        ranks,
        indeterminate,
    }
}

/// Spectrum comparison at infinity.
#[derive(Clone, Debug)]
pub struct SpectrumMatch {
    /// max pairing distance against `{exp(+-2 pi i lambda_1,2)}`
    pub max_distance: f64,
    /// min distance of any eigenvalue from 1
    pub distance_from_ones: f64,
    pub eigenvalues: Vec<C64>,
}

/// Match the eigenvalues of the loop-at-infinity matrix against the
/// exponents predicted by the residue at infinity.
pub fn spectrum_match(tinf: &CMat, sd: &SpectralData) -> SpectrumMatch {
    let eigs = tinf.eigenvalues_polished(1e-2);
    let two_pi = 2.0 * std::f64::consts::PI;
    let unit = |l: f64| C64::new(0.0, two_pi * l).exp();
    let expected = vec![
        unit(sd.lambda1),
        unit(-sd.lambda1),
        unit(sd.lambda2),
        unit(-sd.lambda2),
    ];
    let max_distance = multiset_match_max_distance(&eigs, &expected);
    let distance_from_ones = eigs
        .iter()
        .map(|e| (e - C64::new(1.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    SpectrumMatch {
        max_distance,
        distance_from_ones,
        eigenvalues: eigs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;
    use crate::fuchsian::residue_matrices;
    use crate::model::MassParameters;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sys(a: (i64, i64), b: (i64, i64)) -> FuchsianSystem {
        residue_matrices(&MassParameters::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap())
    }

    #[test]
    fn contractible_pole_free_loop_is_identity() {
        let sys = sys((1, 1), (1, 1));
        let base = sys.points.t0_c() + 1.0;
        let path = PathSpec {
            base,
            pieces: vec![Piece::Arc {
                center: base + 0.2,
                radius: 0.2,
                from_ang: std::f64::consts::PI,
                to_ang: 3.0 * std::f64::consts::PI,
            }],
            clearance: 0.05,
            counterclockwise: true,
        };
        let tr = integrate_along(&sys, &path, 1e-12).unwrap();
        assert!(tr.matrix.sub(&CMat::identity(4)).norm() < 1e-9);
    }

    #[test]
    fn forward_backward_segment_cancels() {
        let sys = sys((1, 2), (1, 1));
        let base = sys.points.t0_c() + 1.0;
        let away = base + c(0.5, 0.4);
        let path = PathSpec {
            base,
            pieces: vec![
                Piece::Line { from: base, to: away },
                Piece::Line { from: away, to: base },
            ],
            clearance: 0.05,
            counterclockwise: true,
        };
        let tr = integrate_along(&sys, &path, 1e-12).unwrap();
        assert!(tr.matrix.sub(&CMat::identity(4)).norm() < 1e-10);
    }

    #[test]
    fn open_paths_rejected() {
        let sys = sys((1, 1), (1, 1));
        let base = sys.points.t0_c() + 1.0;
        let open = PathSpec {
            base,
            pieces: vec![Piece::Line {
                from: base,
                to: base + 1.0,
            }],
            clearance: 0.05,
            counterclockwise: true,
        };
        assert!(integrate_along(&sys, &open, 1e-12).is_err());
    }

    #[test]
    fn clearance_violation_rejected() {
        let sys = sys((1, 1), (1, 1));
        let base = sys.points.t0_c() + 1.0;
        let through_pole = PathSpec {
            base,
            pieces: vec![
                Piece::Line { from: base, to: base - 2.0 },
                Piece::Line { from: base - 2.0, to: base },
            ],
            clearance: 0.1 * sys.points.min_gap(),
            counterclockwise: true,
        };
        assert!(integrate_along(&sys, &through_pole, 1e-12).is_err());
    }

    #[test]
    fn loop_around_t0_is_identity() {
        // every local solution at t0 is meromorphic: the loop acts trivially
        let sys = sys((1, 1), (1, 1));
        let tr = loop_monodromy(&sys, Pole::T0, 1e-12).unwrap();
        let dev = tr.matrix.sub(&CMat::identity(4)).norm();
        assert!(dev < 1e-8, "T0 deviates from identity by {dev}");
    }

    #[test]
    fn t1_is_unipotent_with_two_by_two_blocks() {
        let sys = sys((1, 2), (1, 2));
        let tr = loop_monodromy(&sys, Pole::T1, 1e-12).unwrap();
        let n = tr.matrix.sub(&CMat::identity(4));
        let profile = unipotent_structure(&tr.matrix, 1e-6);
        assert_eq!(profile.block_sizes, vec![2, 2], "profile {profile:?}");
        assert!(!profile.indeterminate);
        assert_eq!(n.rank_with_threshold(1e-6 * n.singular_values()[0]), 2);
        // residue trace is the integer -2, so the determinant is 1
        assert!((tr.matrix.det() - c(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn abel_identity_det_matches_trace_integral() {
        let sys = sys((1, 1), (1, 1));
        for pole in [Pole::T1, Pole::Infinity] {
            let tr = loop_monodromy(&sys, pole, 1e-13).unwrap();
            let det = tr.matrix.det();
            assert!(
                (det - tr.abel_det).norm() < 1e-9,
                "Abel mismatch: det {det}, exp-integral {}",
                tr.abel_det
            );
        }
    }

    #[test]
    fn homotopic_loops_give_equal_matrices() {
        let sys = sys((1, 2), (1, 1));
        let base = sys.points.t0_c() + 1.0;
        let gap = sys.points.min_gap();
        let center = sys.points.t1_c();
        let make = |radius: f64| {
            let dir = (base - center) / (base - center).norm();
            let entry = center + radius * dir;
            let ang0 = dir.im.atan2(dir.re);
            PathSpec {
                base,
                pieces: vec![
                    Piece::Line { from: base, to: entry },
                    Piece::Arc {
                        center,
                        radius,
                        from_ang: ang0,
                        to_ang: ang0 + 2.0 * std::f64::consts::PI,
                    },
                    Piece::Line { from: entry, to: base },
                ],
                clearance: 0.1 * gap,
                counterclockwise: true,
            }
        };
        let a = integrate_along(&sys, &make(0.15 * gap), 1e-12).unwrap();
        let b = integrate_along(&sys, &make(0.3 * gap), 1e-12).unwrap();
        assert!(a.matrix.sub(&b.matrix).norm() < 1e-8);
    }

    #[test]
    fn base_point_change_preserves_spectrum() {
        let sys = sys((1, 1), (1, 1));
        let t1a = integrate_along(
            &sys,
            &loop_path(&sys, Pole::T1, sys.points.t0_c() - 1.0),
            1e-12,
        )
        .unwrap();
        let t1b = integrate_along(
            &sys,
            &loop_path(&sys, Pole::T1, sys.points.t0_c() + c(0.8, 0.9)),
            1e-12,
        )
        .unwrap();
        let ea = t1a.matrix.eigenvalues_polished(1e-2);
        let eb = t1b.matrix.eigenvalues_polished(1e-2);
        assert!(multiset_match_max_distance(&ea, &eb) < 1e-8);
    }

    #[test]
    fn group_relation_and_dets() {
        for (a, b) in [((1, 1), (1, 1)), ((1, 2), (1, 1))] {
            let sys = sys(a, b);
            let rep = monodromy_rep(&sys, 1e-12).unwrap();
            assert!(
                rep.relation_residual < 1e-6,
                "relation residual {} at {a:?},{b:?} (order {})",
                rep.relation_residual,
                rep.relation_order
            );
            for d in rep.dets {
                assert!((d - c(1.0, 0.0)).norm() < 1e-8, "det {d}");
            }
            // T0 is trivial, so the relation reduces to T1 T2 = Tinf^-1
            let prod = rep.t1.matmul(&rep.t2).matmul(&rep.tinf);
            assert!(prod.sub(&CMat::identity(4)).norm() < 1e-6);
        }
    }

    #[test]
    fn spectrum_at_infinity_matches_exponents() {
        let sys = sys((1, 1), (1, 1));
        let rep = monodromy_rep(&sys, 1e-12).unwrap();
        let sd = crate::model::spectral_data(&sys.masses);
        let sm = spectrum_match(&rep.tinf, &sd);
        assert!(sm.max_distance < 1e-6, "spectrum error {}", sm.max_distance);
        // eigenvalues approx -0.32495 +- 0.94573 i, each twice
        let target = c(-0.324_95, 0.945_73);
        let close = sm
            .eigenvalues
            .iter()
            .filter(|e| (**e - target).norm() < 1e-3 || (**e - target.conj()).norm() < 1e-3)
            .count();
        assert_eq!(close, 4);
        assert!(sm.distance_from_ones > 0.1);
    }

    #[test]
    fn explicit_jordan_block_profiles() {
        // the displayed two-block unipotent matrix
        let m = CMat::from_rows(vec![
            vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert_eq!(unipotent_structure(&m, 1e-6).block_sizes, vec![2, 2]);
        assert_eq!(
            unipotent_structure(&CMat::identity(4), 1e-6).block_sizes,
            vec![1, 1, 1, 1]
        );
        // a single length-4 chain
        let mut j4 = CMat::identity(4);
        j4[(0, 1)] = c(1.0, 0.0);
        j4[(1, 2)] = c(1.0, 0.0);
        j4[(2, 3)] = c(1.0, 0.0);
        assert_eq!(unipotent_structure(&j4, 1e-6).block_sizes, vec![4]);
    }

    #[test]
    fn deterministic_monodromy() {
        let sys = sys((1, 2), (1, 1));
        let a = loop_monodromy(&sys, Pole::T1, 1e-12).unwrap();
        let b = loop_monodromy(&sys, Pole::T1, 1e-12).unwrap();
        assert_eq!(a.matrix.flat(), b.matrix.flat());
    }
}
