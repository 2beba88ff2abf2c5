//! Exact residue matrices of the Fuchsian normal variational system
//!
//!   dx/dt = ( A/(t - t0) + B/(t - t1) + C/(t - t2) ) x,
//!
//! with `B = R + iJ`, `C = R - iJ`, all entries closed forms in the masses
//! over Q(sqrt3, i), at angular momentum normalized to 1. The closed forms
//! are transcribed in one table-driven constructor below; since a silent
//! transcription slip is the main correctness risk of this layer, the
//! construction is cross-checked entry by entry against an independently
//! derived variational system (`derivation_crosscheck`).

use num_complex::Complex64;

use crate::exactalg::field::FieldElement;
use crate::exactalg::matrix::{charpoly_string, FieldMatrix};
use crate::model::{derive_constants, singular_points, MassParameters, SingularPoints};
use crate::numeric::cmatrix::CMat;
use crate::Error;

type C64 = Complex64;

/// The three-pole system with exact residues.
#[derive(Clone)]
pub struct FuchsianSystem {
    pub masses: MassParameters,
    pub points: SingularPoints,
    /// residue at the real pole t0
    pub res_a: FieldMatrix,
    /// residue at t1 (upper pole), `R + iJ`
    pub res_b: FieldMatrix,
    /// residue at t2 = conj(t1), `R - iJ`
    pub res_c: FieldMatrix,
    pub r_part: FieldMatrix,
    pub j_part: FieldMatrix,
    /// the printed closed form of the residue at infinity
    pub a_inf_printed: FieldMatrix,
}

struct Ctx {
    a: FieldElement,
    b: FieldElement,
    s1: FieldElement,
    s2: FieldElement,
    s3: FieldElement,
}

impl Ctx {
    /// `sum c * alpha^i * beta^j`.
    fn poly(&self, terms: &[(i64, u32, u32)]) -> FieldElement {
        let mut acc = FieldElement::zero();
        for &(c, i, j) in terms {
            let t = &(&FieldElement::from_int(c) * &self.a.powi(i)) * &self.b.powi(j);
            acc = &acc + &t;
        }
        acc
    }

    /// `(p/q) * num / (alpha S1)` -- the "small" entry family.
    fn small(&self, p: i64, q: i64, num: &FieldElement) -> FieldElement {
        &(&FieldElement::from_ratio(p, q) * num) / &(&self.a * &self.s1)
    }

    /// `(p/q) * alpha^2 S2^3 S3^3 * extra / S1^3` -- the "big" entry family.
    fn big(&self, p: i64, q: i64, extra: &FieldElement) -> FieldElement {
        let s23 = &self.s2.powi(3) * &self.s3.powi(3);
        let num = &(&(&FieldElement::from_ratio(p, q) * &self.a.powi(2)) * &s23) * extra;
        &num / &self.s1.powi(3)
    }

    fn sqrt3(&self) -> FieldElement {
        FieldElement::sqrt3()
    }

    /// `sqrt3 (alpha + 1) beta (alpha - 1)`, shared by many entries.
    fn odd_factor(&self) -> FieldElement {
        let ap1 = &self.a + &FieldElement::one();
        let am1 = &self.a - &FieldElement::one();
        &(&(&self.sqrt3() * &ap1) * &self.b) * &am1
    }

    /// `2 S1 / (S2^2 S3^3 alpha^4 beta)`, the coupling into the momentum block.
    fn coupling(&self) -> FieldElement {
        let den = &(&(&self.s2.powi(2) * &self.s3.powi(3)) * &self.a.powi(4)) * &self.b;
        &(&FieldElement::from_int(2) * &self.s1) / &den
    }
}

fn build_a_inf(c: &Ctx) -> FieldMatrix {
    let ap1 = &c.a + &FieldElement::one();
    let am1 = &c.a - &FieldElement::one();
    let odd = c.small(3, 4, &c.odd_factor());
    let coup = c.coupling();
    let e11 = c.small(
        1,
        4,
        &c.poly(&[(12, 1, 0), (5, 0, 1), (5, 2, 1), (26, 1, 1), (12, 2, 0)]),
    );
    let e22 = -&c.small(
        1,
        4,
        &c.poly(&[(-12, 1, 0), (1, 0, 1), (1, 2, 1), (-2, 1, 1), (-12, 2, 0)]),
    );
    let e31 = c.big(
        1,
        8,
        &(&(&c.b * &ap1) * &c.poly(&[(2, 1, 0), (13, 0, 1), (13, 2, 1), (24, 1, 1), (2, 2, 0)])),
    );
    let e32 = c.big(
        3,
        8,
        &(&(&(&c.sqrt3() * &c.poly(&[(1, 0, 1), (2, 1, 0), (4, 1, 1), (1, 2, 1), (2, 2, 0)]))
            * &am1)
            * &c.b),
    );
    let e33 = -&c.small(1, 4, &(&c.b * &c.poly(&[(5, 2, 0), (14, 1, 0), (5, 0, 0)])));
    let e42 = c.big(
        1,
        8,
        &(&(&c.b * &ap1) * &c.poly(&[(-10, 1, 0), (7, 0, 1), (7, 2, 1), (-12, 1, 1), (-10, 2, 0)])),
    );
    let e44 = c.small(1, 4, &(&c.b * &c.poly(&[(10, 1, 0), (1, 2, 0), (1, 0, 0)])));
    let z = FieldElement::zero();
    FieldMatrix::from_rows(vec![
        vec![e11, odd.clone(), -&coup, z.clone()],
        vec![odd.clone(), e22, z.clone(), -&coup],
        vec![e31, e32.clone(), e33, -&odd],
        vec![e32, e42, -&odd, e44],
    ])
}

fn build_a(c: &Ctx) -> FieldMatrix {
    let ap1 = &c.a + &FieldElement::one();
    let am1 = &c.a - &FieldElement::one();
    let odd = c.small(1, 4, &c.odd_factor());
    let coup = c.coupling();
    let z = FieldElement::zero();
    let e11 = -&c.small(1, 4, &(&ap1 * &c.poly(&[(1, 1, 1), (4, 1, 0), (1, 0, 1)])));
    let e22 = -&c.small(
        1,
        4,
        &c.poly(&[(10, 1, 1), (3, 2, 1), (3, 0, 1), (4, 2, 0), (4, 1, 0)]),
    );
    let e31 = -&c.big(1, 8, &(&(&(&c.b.powi(2) * &ap1) * &am1) * &am1));
    let e32 = c.big(
        1,
        8,
        &(&(&(&c.sqrt3() * &am1) * &ap1.powi(2)) * &c.b.powi(2)),
    );
    let e33 = c.small(1, 4, &(&(&am1 * &am1) * &c.b));
    let e42 = -&c.big(3, 8, &(&ap1.powi(3) * &c.b.powi(2)));
    let e44 = c.small(3, 4, &(&ap1.powi(2) * &c.b));
    FieldMatrix::from_rows(vec![
        vec![e11, odd.clone(), coup.clone(), z.clone()],
        vec![odd.clone(), e22, z.clone(), coup],
        vec![e31, e32.clone(), e33, -&odd],
        vec![e32, e42, -&odd, e44],
    ])
}

fn build_r(c: &Ctx) -> FieldMatrix {
    let ap1 = &c.a + &FieldElement::one();
    let am1 = &c.a - &FieldElement::one();
    let odd = c.small(1, 2, &c.odd_factor());
    let z = FieldElement::zero();
    let e11 = -&c.small(
        1,
        2,
        &c.poly(&[(2, 1, 0), (1, 0, 1), (6, 1, 1), (2, 2, 0), (1, 2, 1)]),
    );
    let e22 = c.small(1, 2, &(&ap1 * &c.poly(&[(-2, 1, 0), (1, 1, 1), (1, 0, 1)])));
    let e31 = -&c.big(
        1,
        8,
        &(&(&c.b * &ap1) * &c.poly(&[(1, 2, 0), (6, 2, 1), (1, 1, 0), (13, 1, 1), (6, 0, 1)])),
    );
    let e32 = -&c.big(
        1,
        8,
        &(&(&(&c.sqrt3() * &c.poly(&[(3, 2, 0), (2, 2, 1), (7, 1, 1), (3, 1, 0), (2, 0, 1)]))
            * &am1)
            * &c.b),
    );
    // (alpha + sqrt3 + 2)(alpha + 2 - sqrt3) beta
    let two = FieldElement::from_int(2);
    let f1 = &(&c.a + &c.sqrt3()) + &two;
    let f2 = &(&c.a + &two) - &c.sqrt3();
    let e33 = c.small(1, 2, &(&(&f1 * &f2) * &c.b));
    let e42 = -&c.big(
        1,
        8,
        &(&(&c.b * &ap1) * &c.poly(&[(-5, 2, 0), (2, 2, 1), (-5, 1, 0), (-9, 1, 1), (2, 0, 1)])),
    );
    FieldMatrix::from_rows(vec![
        vec![e11, -&odd, z.clone(), z.clone()],
        vec![-&odd, e22, z.clone(), z.clone()],
        vec![e31, e32.clone(), e33.clone(), odd.clone()],
        vec![e32, e42, odd, -&e33],
    ])
}

fn build_j(c: &Ctx) -> FieldMatrix {
    let ap1 = &c.a + &FieldElement::one();
    let am1 = &c.a - &FieldElement::one();
    let odd = c.small(1, 2, &c.odd_factor());
    let z = FieldElement::zero();
    let even = c.small(
        1,
        2,
        &c.poly(&[(2, 1, 0), (1, 0, 1), (6, 1, 1), (2, 2, 0), (1, 2, 1)]),
    );
    let r22_form = c.small(1, 2, &(&ap1 * &c.poly(&[(-2, 1, 0), (1, 1, 1), (1, 0, 1)])));
    let e31 = -&c.big(
        1,
        4,
        &(&(&(&c.sqrt3() * &am1) * &ap1.powi(2)) * &c.b.powi(2)),
    );
    let e32 = c.big(
        1,
        4,
        &(&(&c.b.powi(2) * &ap1) * &c.poly(&[(1, 2, 0), (4, 1, 0), (1, 0, 0)])),
    );
    FieldMatrix::from_rows(vec![
        vec![-&odd, r22_form.clone(), z.clone(), z.clone()],
        vec![even.clone(), odd.clone(), z.clone(), z.clone()],
        vec![e31.clone(), e32.clone(), odd.clone(), -&even],
        vec![e32, -&e31, -&r22_form, -&odd],
    ])
}

/// Build the exact residue matrices for the given masses (k normalized to 1).
pub fn residue_matrices(m: &MassParameters) -> FuchsianSystem {
    let dc = derive_constants(m);
    let ctx = Ctx {
        a: m.alpha_fe(),
        b: m.beta_fe(),
        s1: dc.s1,
        s2: dc.s2,
        s3: dc.s3,
    };
    let r_part = build_r(&ctx);
    let j_part = build_j(&ctx);
    let i = FieldElement::i();
    let res_b = r_part.add(&j_part.scale(&i));
    let res_c = r_part.sub(&j_part.scale(&i));
    let points = singular_points(m, &crate::exactalg::rat(1)).expect("k = 1 is nonzero");
    FuchsianSystem {
        masses: m.clone(),
        points,
        res_a: build_a(&ctx),
        res_b,
        res_c,
        r_part,
        j_part,
        a_inf_printed: build_a_inf(&ctx),
    }
}

impl FuchsianSystem {
    /// `-(A + B + C) = -(A + 2R)`, the residue at infinity.
    pub fn a_infinity(&self) -> FieldMatrix {
        self.res_a
            .add(&self.res_b)
            .add(&self.res_c)
            .scale(&(-FieldElement::one()))
    }

    /// Coefficient matrix at a regular point.
    pub fn rhs(&self, t: C64) -> Result<CMat, Error> {
        let poles = [self.points.t0_c(), self.points.t1_c(), self.points.t2_c()];
        let clearance = 1e-12 * (1.0 + t.norm());
        for p in poles {
            if (t - p).norm() < clearance {
                return Err(Error::Domain(format!("evaluation at a pole: t = {t}")));
            }
        }
        let mut out = CMat::zeros(4, 4);
        for (res, pole) in [
            (&self.res_a, poles[0]),
            (&self.res_b, poles[1]),
            (&self.res_c, poles[2]),
        ] {
            let inv = (t - pole).inv();
            for i in 0..4 {
                for j in 0..4 {
                    out[(i, j)] += res[(i, j)].eval() * inv;
                }
            }
        }
        Ok(out)
    }

    /// Trace of the coefficient matrix at a regular point (for the Abel
    /// determinant identity).
    pub fn rhs_trace(&self, t: C64) -> C64 {
        let poles = [self.points.t0_c(), self.points.t1_c(), self.points.t2_c()];
        let traces = [
            self.res_a.trace().eval(),
            self.res_b.trace().eval(),
            self.res_c.trace().eval(),
        ];
        traces.iter().zip(poles).map(|(tr, p)| tr / (t - p)).sum()
    }

    /// Test hook: add an exact rational perturbation to one entry of the
    /// residue at t0 (negative control for the certification pipeline).
    pub fn perturb_res_a(&mut self, row: usize, col: usize, eps: crate::exactalg::Rational) {
        let delta = FieldElement::from_rational(eps);
        self.res_a[(row, col)] = &self.res_a[(row, col)] + &delta;
    }
}

/// Outcome of the exact structural verification of the residues.
#[derive(Clone, Debug)]
pub struct ResidueReport {
    pub charpoly_a: String,
    pub charpoly_b: String,
    pub charpoly_c: String,
    pub charpoly_a_inf: String,
    /// charpoly(A) = l^2 (l+1)^2 exactly
    pub a_structure_ok: bool,
    /// charpoly(B) = charpoly(C) = (l+2)(l+1) l (l-1) exactly
    pub bc_structure_ok: bool,
    /// C is the entrywise complex conjugate of B
    pub conjugacy_ok: bool,
    /// A and the printed residue at infinity are real matrices
    pub realness_ok: bool,
    /// printed residue at infinity equals -(A + B + C) exactly
    pub a_inf_matches_printed: bool,
    /// trace of the residue at infinity is exactly 6
    pub a_inf_trace_six: bool,
    /// charpoly(A_inf) = (l^2 - 3l - 1)^2 - theta/16 exactly
    pub a_inf_charpoly_ok: bool,
    /// the root set of charpoly(A_inf) is closed under l -> 3 - l
    pub a_inf_symmetry_ok: bool,
}

impl ResidueReport {
    pub fn all_ok(&self) -> bool {
        self.a_structure_ok
            && self.bc_structure_ok
            && self.conjugacy_ok
            && self.realness_ok
            && self.a_inf_matches_printed
            && self.a_inf_trace_six
            && self.a_inf_charpoly_ok
            && self.a_inf_symmetry_ok
    }
}

/// Substitute `l -> 3 - l` in a monic coefficient list.
fn reflect_charpoly(coeffs: &[FieldElement]) -> Vec<FieldElement> {
    let n = coeffs.len() - 1;
    let three = FieldElement::from_int(3);
    let mut out = vec![FieldElement::zero(); n + 1];
    for (k, c) in coeffs.iter().enumerate() {
        let d = n - k; // expand c * (3 - l)^d by binomials
        let mut binom = FieldElement::one();
        for j in 0..=d {
            if j > 0 {
                binom = &(&binom * &FieldElement::from_int((d - j + 1) as i64))
                    / &FieldElement::from_int(j as i64);
            }
            let sign = if j % 2 == 0 {
                FieldElement::one()
            } else {
                -FieldElement::one()
            };
            let term = &(&(&binom * &three.powi((d - j) as u32)) * &sign) * c;
            out[n - j] = &out[n - j] + &term;
        }
    }
    out
}

/// Run every exact structural check of the residue construction.
pub fn structural_checks(sys: &FuchsianSystem) -> ResidueReport {
    let cp_a = sys.res_a.charpoly().expect("4x4");
    let cp_b = sys.res_b.charpoly().expect("4x4");
    let cp_c = sys.res_c.charpoly().expect("4x4");
    let a_inf = sys.a_infinity();
    let cp_inf = a_inf.charpoly().expect("4x4");
    let fe = FieldElement::from_int;

    // l^4 + 2 l^3 + l^2 = l^2 (l + 1)^2
    let expected_a = vec![fe(1), fe(2), fe(1), fe(0), fe(0)];
    // l^4 + 2 l^3 - l^2 - 2 l = (l + 2)(l + 1) l (l - 1)
    let expected_bc = vec![fe(1), fe(2), fe(-1), fe(-2), fe(0)];

    let a_structure_ok = cp_a == expected_a;
    let bc_structure_ok = cp_b == expected_bc && cp_c == expected_bc;
    let conjugacy_ok = sys.res_c == sys.res_b.conj_i();
    let realness_ok = (0..4).all(|i| {
        (0..4).all(|j| sys.res_a[(i, j)].is_real() && sys.a_inf_printed[(i, j)].is_real())
    });
    let a_inf_matches_printed = a_inf == sys.a_inf_printed;
    let a_inf_trace_six = a_inf.trace() == fe(6);

    let theta = crate::model::spectral_data(&sys.masses).theta;
    let expected_inf = vec![fe(1), fe(-6), fe(7), fe(6), &fe(1) - &(&theta / &fe(16))];
    let a_inf_charpoly_ok = cp_inf == expected_inf;
    let a_inf_symmetry_ok = reflect_charpoly(&cp_inf) == cp_inf;

    let factored = |cp: &[FieldElement], ok: bool, form: &str| {
        if ok {
            form.to_string()
        } else {
            charpoly_string(cp)
        }
    };
    ResidueReport {
        charpoly_a: factored(&cp_a, a_structure_ok, "l^2*(l+1)^2"),
        charpoly_b: factored(&cp_b, bc_structure_ok, "(l+2)*(l+1)*l*(l-1)"),
        charpoly_c: factored(&cp_c, bc_structure_ok, "(l+2)*(l+1)*l*(l-1)"),
        charpoly_a_inf: charpoly_string(&cp_inf),
        a_structure_ok,
        bc_structure_ok,
        conjugacy_ok,
        realness_ok,
        a_inf_matches_printed,
        a_inf_trace_six,
        a_inf_charpoly_ok,
        a_inf_symmetry_ok,
    }
}

/// Max pairing distance of the numerical spectrum of `-(A+B+C)` against
/// `{lambda1, lambda2, 3 - lambda1, 3 - lambda2}`.
pub fn a_infinity_spectrum_error(sys: &FuchsianSystem) -> f64 {
    let sd = crate::model::spectral_data(&sys.masses);
    let a_inf = sys.a_infinity();
    let mat = CMat::from_rows(a_inf.eval());
    // equal masses make both exponent pairs double, which plain root
    // extraction only resolves to ~sqrt(eps); polish the clusters
    let eigs = crate::numeric::polynomial_roots_polished(&mat.charpoly(), 1e-4);
    let expected: Vec<C64> = [sd.lambda1, sd.lambda2, 3.0 - sd.lambda1, 3.0 - sd.lambda2]
        .iter()
        .map(|&x| C64::new(x, 0.0))
        .collect();
    crate::numeric::multiset_match_max_distance(&eigs, &expected)
}

/// Deterministic regular sample points for the transcription cross-check:
/// `count` points on a circle of radius 0.55 around the base point t0 + 1,
/// which stays well clear of all three poles for admissible masses.
pub fn crosscheck_sample_points(sys: &FuchsianSystem, count: usize) -> Vec<C64> {
    let base = sys.points.t0_c() + 1.0;
    (0..count)
        .map(|j| {
            let ang = 2.0 * std::f64::consts::PI * (j as f64 + 0.35) / count as f64;
            base + 0.55 * C64::new(ang.cos(), ang.sin())
        })
        .collect()
}

/// Report of the closed-form vs. derived-coefficient comparison.
#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub max_relative_deviation: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compare `rhs` against the independently derived variational coefficient
/// matrix at the given sample points; the deviation is relative to the
/// closed-form matrix norm.
pub fn derivation_crosscheck(
    sys: &FuchsianSystem,
    samples: &[C64],
    tol: f64,
) -> Result<CrosscheckReport, Error> {
    let min_gap = sys.points.min_gap();
    let poles = [sys.points.t0_c(), sys.points.t1_c(), sys.points.t2_c()];
    let mut max_dev: f64 = 0.0;
    for &t in samples {
        for p in poles {
            if (t - p).norm() < 0.05 * min_gap {
                return Err(Error::Domain(format!(
                    "sample point {t} too close to a pole"
                )));
            }
        }
        let exact = sys.rhs(t)?;
        let derived = crate::dynamics::fuchsian_transform(&sys.masses, t)?;
        let dev = exact.sub(&derived).norm() / exact.norm();
        max_dev = max_dev.max(dev);
    }
    Ok(CrosscheckReport {
        max_relative_deviation: max_dev,
        samples: samples.len(),
        tolerance: tol,
        pass: max_dev < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};
    use num_traits::Zero;

    fn masses(a: (i64, i64), b: (i64, i64)) -> MassParameters {
        MassParameters::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap()
    }

    fn fe_ratio(p: i64, q: i64) -> FieldElement {
        FieldElement::from_ratio(p, q)
    }

    #[test]
    fn equal_mass_entries_match_closed_forms() {
        let sys = residue_matrices(&masses((1, 1), (1, 1)));
        assert_eq!(sys.res_a[(0, 0)], fe_ratio(-1, 1));
        assert_eq!(sys.res_a[(0, 2)], fe_ratio(2, 81));
        assert_eq!(sys.r_part[(0, 0)], fe_ratio(-2, 1));
        // the (alpha - 1) factor kills J11 at alpha = 1
        assert!(sys.j_part[(0, 0)].is_zero());
        // printed diagonal of the residue at infinity
        let diag: Vec<FieldElement> = (0..4).map(|i| sys.a_inf_printed[(i, i)].clone()).collect();
        assert_eq!(
            diag,
            vec![fe_ratio(5, 1), fe_ratio(2, 1), fe_ratio(-2, 1), fe_ratio(1, 1)]
        );
    }

    #[test]
    fn structural_checks_pass_on_grid() {
        for (a, b) in [
            ((1, 1), (1, 1)),
            ((1, 3), (2, 3)),
            ((1, 5), (1, 5)),
            ((2, 5), (4, 5)),
            ((1, 10), (1, 5)),
        ] {
            let sys = residue_matrices(&masses(a, b));
            let report = structural_checks(&sys);
            assert!(report.all_ok(), "structural failure at {a:?},{b:?}: {report:?}");
            assert_eq!(report.charpoly_a, "l^2*(l+1)^2");
            assert_eq!(report.charpoly_b, "(l+2)*(l+1)*l*(l-1)");
        }
    }

    #[test]
    fn sqrt3_appears_exactly_where_printed() {
        // generic masses: odd entries carry sqrt3, the rest stay rational
        let sys = residue_matrices(&masses((2, 5), (3, 4)));
        let sqrt3_positions = [(0, 1), (1, 0), (2, 1), (2, 3), (3, 0), (3, 2)];
        for i in 0..4 {
            for j in 0..4 {
                let has_sqrt3 = !sys.res_a[(i, j)].b.is_zero();
                assert_eq!(
                    has_sqrt3,
                    sqrt3_positions.contains(&(i, j)),
                    "sqrt3 pattern mismatch at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn perturbed_residue_fails_structural_checks() {
        let mut sys = residue_matrices(&masses((1, 1), (1, 1)));
        sys.perturb_res_a(0, 0, ratio(1, 1000));
        let report = structural_checks(&sys);
        assert!(!report.a_structure_ok);
        assert!(!report.all_ok());
    }

    #[test]
    fn rhs_is_real_on_the_real_axis() {
        let sys = residue_matrices(&masses((1, 2), (1, 1)));
        let m = sys.rhs(C64::new(2.0, 0.0)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(m[(i, j)].im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rhs_rejects_poles() {
        let sys = residue_matrices(&masses((1, 1), (1, 1)));
        assert!(sys.rhs(sys.points.t0_c()).is_err());
        assert!(sys.rhs(sys.points.t1_c()).is_err());
    }

    #[test]
    fn fuchsian_asymptotics_at_large_t() {
        let sys = residue_matrices(&masses((1, 1), (1, 1)));
        let t = C64::new(1.0e6, 3.0e5);
        let m = sys.rhs(t).unwrap().scale(t);
        let minus_a_inf = CMat::from_rows(sys.a_infinity().eval()).scale(C64::new(-1.0, 0.0));
        let dev = m.sub(&minus_a_inf).norm() / minus_a_inf.norm();
        assert!(dev < 1e-5, "asymptotic deviation {dev}");
    }

    #[test]
    fn a_infinity_spectrum_matches_lambdas() {
        for (a, b) in [((1, 1), (1, 1)), ((1, 2), (1, 1)), ((1, 10), (1, 5))] {
            let sys = residue_matrices(&masses(a, b));
            let err = a_infinity_spectrum_error(&sys);
            assert!(err < 1e-10, "spectrum error {err} at {a:?},{b:?}");
        }
    }

    #[test]
    fn contour_recovers_residue_at_t0() {
        let sys = residue_matrices(&masses((1, 2), (1, 1)));
        let center = sys.points.t0_c();
        let radius = 0.3 * sys.points.min_gap();
        let nodes = 256;
        let mut acc = CMat::zeros(4, 4);
        for j in 0..nodes {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
            let z = center + radius * C64::new(ang.cos(), ang.sin());
            // (1/2 pi i) closed-contour trapezoid: dz node weight r e^{i ang}/n
            let weight = radius * C64::new(ang.cos(), ang.sin()) / nodes as f64;
            acc = acc.add(&sys.rhs(z).unwrap().scale(weight));
        }
        let expected = CMat::from_rows(sys.res_a.eval());
        assert!(acc.sub(&expected).norm() < 1e-8);
    }

    #[test]
    fn contour_around_pole_free_rectangle_vanishes() {
        let sys = residue_matrices(&masses((1, 1), (1, 1)));
        // rectangle strictly to the right of the pole line Re t = t0
        let t0 = sys.points.t0_c();
        let corners = [
            t0 + C64::new(0.5, -1.0),
            t0 + C64::new(2.5, -1.0),
            t0 + C64::new(2.5, 1.0),
            t0 + C64::new(0.5, 1.0),
        ];
        let mut acc = CMat::zeros(4, 4);
        for s in 0..4 {
            let from = corners[s];
            let to = corners[(s + 1) % 4];
            let side = crate::numeric::rk45::integrate(
                |u, _y| {
                    let z = from + (to - from) * u;
                    sys.rhs(z).unwrap().scale(to - from).flat().to_vec()
                },
                0.0,
                1.0,
                vec![C64::new(0.0, 0.0); 16],
                1e-13,
                1e-13,
            )
            .unwrap();
            acc = acc.add(&CMat::from_flat(4, 4, side));
        }
        assert!(acc.norm() < 1e-10, "contour integral {}", acc.norm());
    }

    #[test]
    fn pole_data_matches_model_layer() {
        let m = masses((2, 5), (4, 5));
        let sys = residue_matrices(&m);
        let sp = singular_points(&m, &rat(1)).unwrap();
        assert_eq!(sys.points.t0, sp.t0);
        assert_eq!(sys.points.t1, sp.t1);
    }
}
