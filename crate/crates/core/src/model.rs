//! Closed-form scalar layer: mass parameters, symmetric constants, the
//! coefficients of the parabolic orbit parametrization, the singular points
//! of the normal variational system, and the exponent spectrum at infinity.
//!
//! Masses are `(m1, m2, m3) = (alpha, beta, 1)` with `0 < alpha <= beta <= 1`,
//! all rational, so every value here is exact in Q(sqrt3, i). The angular
//! momentum `k` is kept as an explicit parameter for the w-plane data and
//! normalized to `k = 1` everywhere downstream (time scale `w = k t`).

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::exactalg::field::FieldElement;
use crate::exactalg::{rat, Rational};
use crate::Error;

/// Masses `(alpha, beta, 1)` with `0 < alpha <= beta <= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassParameters {
    alpha: Rational,
    beta: Rational,
}

impl MassParameters {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self, Error> {
        if !alpha.is_positive() {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if alpha > beta {
            return Err(Error::Domain(format!(
                "mass ordering requires alpha <= beta, got {alpha} > {beta}"
            )));
        }
        if beta > rat(1) {
            return Err(Error::Domain(format!("beta must be <= 1, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn alpha_fe(&self) -> FieldElement {
        FieldElement::from_rational(self.alpha.clone())
    }

    pub fn beta_fe(&self) -> FieldElement {
        FieldElement::from_rational(self.beta.clone())
    }
}

/// The symmetric functions and reciprocal-mass combinations feeding every
/// closed-form coefficient.
#[derive(Clone, Debug)]
pub struct DerivedConstants {
    /// m1 + m2 + m3
    pub s1: FieldElement,
    /// m1 m2 + m2 m3 + m3 m1
    pub s2: FieldElement,
    /// m2 + 2 m3
    pub s3: FieldElement,
    /// 1/m1 + 1/m3
    pub m1mass: FieldElement,
    /// 1/m2 + 1/m3
    pub m2mass: FieldElement,
}

/// Derive the symmetric constants; masses are validated by construction.
pub fn derive_constants(m: &MassParameters) -> DerivedConstants {
    let a = m.alpha_fe();
    let b = m.beta_fe();
    let one = FieldElement::one();
    let s1 = &(&a + &b) + &one;
    let s2 = &(&a * &b) + &(&a + &b);
    let s3 = &b + &FieldElement::from_int(2);
    let m1mass = &a.inv() + &one;
    let m2mass = &b.inv() + &one;
    for (name, v) in [("S1", &s1), ("S2", &s2), ("S3", &s3)] {
        debug_assert!(v.is_positive_real(), "{name} must be positive");
    }
    DerivedConstants {
        s1,
        s2,
        s3,
        m1mass,
        m2mass,
    }
}

/// Constants of the equilateral-orbit parametrization: the momentum
/// relations `p2 = cA p + cB/q`, `p3 = cC p + cD/q`, the energy relation
/// `ea p^2 + eb p/q + ec/q + ed/q^2 = h`, and the polynomials `L`, `Z`
/// whose roots are the finite singular points.
#[derive(Clone, Debug)]
pub struct LagrangeCoefficients {
    pub c_a: FieldElement,
    pub c_b: FieldElement,
    pub c_c: FieldElement,
    pub c_d: FieldElement,
    pub ea: FieldElement,
    pub eb: FieldElement,
    pub ec: FieldElement,
    pub ed: FieldElement,
    /// L(w) = l1 w + l2
    pub lpoly: (FieldElement, FieldElement),
    /// Z(w) = z1 w^2 + z2 w + z3
    pub zpoly: (FieldElement, FieldElement, FieldElement),
}

impl LagrangeCoefficients {
    pub fn l_at(&self, w: &FieldElement) -> FieldElement {
        &(&self.lpoly.0 * w) + &self.lpoly.1
    }

    pub fn z_at(&self, w: &FieldElement) -> FieldElement {
        &(&(&(&self.zpoly.0 * w) + &self.zpoly.1) * w) + &self.zpoly.2
    }

    /// q(w) = -(ea w^2 + eb w + ed)/ec, the orbital scale.
    pub fn q_of_w(&self, w: &FieldElement) -> FieldElement {
        let num = &(&(&(&self.ea * w) + &self.eb) * w) + &self.ed;
        -&(&num / &self.ec)
    }

    /// dq/dw = -(2 ea w + eb)/ec.
    pub fn dq_dw(&self, w: &FieldElement) -> FieldElement {
        let num = &(&(&FieldElement::from_int(2) * &self.ea) * w) + &self.eb;
        -&(&num / &self.ec)
    }
}

pub fn lagrange_coefficients(
    m: &MassParameters,
    k: &Rational,
) -> Result<LagrangeCoefficients, Error> {
    if k.is_zero() {
        return Err(Error::Domain(
            "k = 0 is the triple-collision degenerate case".into(),
        ));
    }
    let dc = derive_constants(m);
    let (s1, s2, s3) = (&dc.s1, &dc.s2, &dc.s3);
    let a = m.alpha_fe();
    let b = m.beta_fe();
    let one = FieldElement::one();
    let two = FieldElement::from_int(2);
    let kf = FieldElement::from_rational(k.clone());
    let sqrt3 = FieldElement::sqrt3();

    let c_a = &(&b * &(&one - &a)) / &(&a * s3);
    let c_b = -&(&(&(&(&sqrt3 * &kf) * s1) * &b) / &(s2 * s3));
    let c_c = &(&(&sqrt3 * &b) * &(&a + &one)) / &(&a * s3);
    let c_d = -&(&(&(&kf * &b) * &(&(s2 + &(&a * &b)) - &one)) / &(s2 * s3));

    let ea = &(&(&two * s1) * s2) / &(&(&a * &a) * &(s3 * s3));
    let eb = -&(&(&(&(&two * &sqrt3) * &kf) * &(&b * s1)) / &(&a * &(s3 * s3)));
    let ec = -s2;
    let b2b1 = &(&(&b * &b) + &b) + &one; // m2^2 + m2 m3 + m3^2
    let ed = &(&(&(&two * &(&kf * &kf)) * s1) * &b2b1) / &(&(s3 * s3) * s2);

    let l1 = &two * s2;
    let l2 = -&(&(&sqrt3 * &(&a * &b)) * &kf);
    let z1 = s2 * s2;
    let z2 = -&(&(&(&sqrt3 * &(&a * &b)) * &kf) * s2);
    let z3 = &(&(&kf * &kf) * &(&a * &a)) * &b2b1;

    debug_assert!(ea.is_positive_real());
    debug_assert!(ec.sign_real() < 0);
    // discriminant of Z is -k^2 m1^2 S2^2 S3^2 < 0: complex conjugate roots
    let disc = &(&z2 * &z2) - &(&(&FieldElement::from_int(4) * &z1) * &z3);
    debug_assert!(disc.sign_real() < 0);

    Ok(LagrangeCoefficients {
        c_a,
        c_b,
        c_c,
        c_d,
        ea,
        eb,
        ec,
        ed,
        lpoly: (l1, l2),
        zpoly: (z1, z2, z3),
    })
}

/// Singular points of the normal variational system, both in the w-plane
/// (k-dependent) and after the `w = k t` normalization.
#[derive(Clone, Debug)]
pub struct SingularPoints {
    /// root of L (moment of maximal approach), `w2 = sqrt3 m1 m2 k / (2 S2)`
    pub w2: FieldElement,
    /// roots of Z ("complex collisions"), conjugate pair
    pub w3: FieldElement,
    pub w4: FieldElement,
    /// k-normalized poles: t0 real, t1 = conj(t2)
    pub t0: FieldElement,
    pub t1: FieldElement,
    pub t2: FieldElement,
}

impl SingularPoints {
    pub fn t0_c(&self) -> Complex64 {
        self.t0.eval()
    }
    pub fn t1_c(&self) -> Complex64 {
        self.t1.eval()
    }
    pub fn t2_c(&self) -> Complex64 {
        self.t2.eval()
    }

    /// Minimum pairwise distance of the three finite poles.
    pub fn min_gap(&self) -> f64 {
        let (t0, t1, t2) = (self.t0_c(), self.t1_c(), self.t2_c());
        (t0 - t1)
            .norm()
            .min((t0 - t2).norm())
            .min((t1 - t2).norm())
    }
}

pub fn singular_points(m: &MassParameters, k: &Rational) -> Result<SingularPoints, Error> {
    if k.is_zero() {
        return Err(Error::Domain(
            "k = 0 collapses all finite singular points into a triple collision".into(),
        ));
    }
    let dc = derive_constants(m);
    let a = m.alpha_fe();
    let b = m.beta_fe();
    let kf = FieldElement::from_rational(k.clone());
    let two_s2 = &FieldElement::from_int(2) * &dc.s2;
    let sqrt3 = FieldElement::sqrt3();
    let i = FieldElement::i();

    // t0 = sqrt3 m1 m2 / (2 S2), t1/t2 = m1 (sqrt3 m2 +- i S3) / (2 S2)
    let t0 = &(&sqrt3 * &(&a * &b)) / &two_s2;
    let t1 = &(&a * &(&(&sqrt3 * &b) + &(&i * &dc.s3))) / &two_s2;
    let t2 = t1.conj_i();
    let w2 = &kf * &t0;
    let w3 = &kf * &t1;
    let w4 = &kf * &t2;

    debug_assert!(t0.is_positive_real());
    debug_assert_eq!(t2, t1.conj_i());

    Ok(SingularPoints {
        w2,
        w3,
        w4,
        t0,
        t1,
        t2,
    })
}

/// Exponent data at infinity: `theta = 144 (1 - 3 S2 / S1^2)` and
/// `lambda_{1,2} = 3/2 + sqrt(13 +- sqrt(theta))/2`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub theta: FieldElement,
    pub sqrt_theta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// exact statement of `0 <= sqrt(theta) < 12`
    pub bound_ok: bool,
}

pub fn spectral_data(m: &MassParameters) -> SpectralData {
    let dc = derive_constants(m);
    let s1sq = &dc.s1 * &dc.s1;
    let ratio = &(&FieldElement::from_int(3) * &dc.s2) / &s1sq;
    let theta = &FieldElement::from_int(144) * &(&FieldElement::one() - &ratio);
    let theta_rat = theta
        .as_rational()
        .expect("theta is rational for rational masses")
        .clone();
    let bound_ok = !theta_rat.is_negative() && theta_rat < rat(144);
    let sqrt_theta = crate::exactalg::rational_to_f64(&theta_rat).max(0.0).sqrt();
    let lambda1 = 1.5 + 0.5 * (13.0 + sqrt_theta).sqrt();
    let lambda2 = 1.5 + 0.5 * (13.0 - sqrt_theta).sqrt();
    SpectralData {
        theta,
        sqrt_theta,
        lambda1,
        lambda2,
        bound_ok,
    }
}

/// One row of the integer resonance table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceRow {
    pub r: u32,
    /// is 13 + r a perfect square?
    pub plus_is_square: bool,
    /// is 13 - r a perfect square?
    pub minus_is_square: bool,
}

impl ResonanceRow {
    pub fn resonant(&self) -> bool {
        self.plus_is_square && self.minus_is_square
    }
}

/// Scan `r = 0..=11` for integer pairs `sqrt(13 + r)`, `sqrt(13 - r)`.
///
/// No row is resonant, which is exactly why the spectrum at infinity can
/// never be `{1, 1, 1, 1}`.
pub fn resonance_scan() -> (Vec<ResonanceRow>, bool) {
    let is_square = |n: u32| {
        let s = (n as f64).sqrt().round() as u32;
        s * s == n
    };
    let rows: Vec<ResonanceRow> = (0..=11)
        .map(|r| ResonanceRow {
            r,
            plus_is_square: is_square(13 + r),
            minus_is_square: is_square(13 - r),
        })
        .collect();
    let no_resonance = rows.iter().all(|row| !row.resonant());
    (rows, no_resonance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    fn masses(a: (i64, i64), b: (i64, i64)) -> MassParameters {
        MassParameters::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap()
    }

    fn fe_int(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    fn fe_ratio(p: i64, q: i64) -> FieldElement {
        FieldElement::from_ratio(p, q)
    }

    fn fe_sqrt3(p: i64, q: i64) -> FieldElement {
        FieldElement::new(rat(0), ratio(p, q), rat(0), rat(0))
    }

    #[test]
    fn mass_validation() {
        assert!(MassParameters::new(rat(0), rat(1)).is_err());
        assert!(MassParameters::new(rat(3), rat(1)).is_err());
        assert!(MassParameters::new(ratio(1, 2), ratio(1, 3)).is_err());
        assert!(MassParameters::new(ratio(1, 2), ratio(5, 4)).is_err());
        assert!(MassParameters::new(ratio(1, 2), rat(1)).is_ok());
    }

    #[test]
    fn symmetric_constants_at_sample_masses() {
        let dc = derive_constants(&masses((1, 1), (1, 1)));
        assert_eq!(dc.s1, fe_int(3));
        assert_eq!(dc.s2, fe_int(3));
        assert_eq!(dc.s3, fe_int(3));
        assert_eq!(dc.m1mass, fe_int(2));

        let dc = derive_constants(&masses((1, 2), (1, 1)));
        assert_eq!(dc.s1, fe_ratio(5, 2));
        assert_eq!(dc.s2, fe_int(2));
        assert_eq!(dc.s3, fe_int(3));
        assert_eq!(dc.m1mass, fe_int(3));
        assert_eq!(dc.m2mass, fe_int(2));
    }

    #[test]
    fn constants_symmetric_under_mass_swap() {
        // S1, S2 are symmetric polynomials of the first two masses
        let ab = derive_constants(&masses((1, 3), (2, 3)));
        // the swap lies outside the alpha <= beta domain, so compute directly
        let a = fe_ratio(2, 3);
        let b = fe_ratio(1, 3);
        let one = FieldElement::one();
        assert_eq!(&(&a + &b) + &one, ab.s1);
        assert_eq!(&(&a * &b) + &(&a + &b), ab.s2);
    }

    #[test]
    fn equal_mass_orbit_coefficients() {
        let lc = lagrange_coefficients(&masses((1, 1), (1, 1)), &rat(1)).unwrap();
        assert_eq!(lc.c_a, FieldElement::zero());
        assert_eq!(lc.c_b, fe_sqrt3(-1, 3));
        assert_eq!(lc.c_c, fe_sqrt3(2, 3));
        assert_eq!(lc.c_d, fe_ratio(-1, 3));
        assert_eq!(lc.ea, fe_int(2));
        assert_eq!(lc.eb, fe_sqrt3(-2, 3));
        assert_eq!(lc.ec, fe_int(-3));
        assert_eq!(lc.ed, fe_ratio(2, 3));
        assert_eq!(lc.lpoly, (fe_int(6), fe_sqrt3(-1, 1)));
        assert_eq!(lc.zpoly, (fe_int(9), fe_sqrt3(-3, 1), fe_int(3)));
    }

    #[test]
    fn k_zero_rejected() {
        let m = masses((1, 1), (1, 1));
        assert!(lagrange_coefficients(&m, &rat(0)).is_err());
        assert!(singular_points(&m, &rat(0)).is_err());
    }

    #[test]
    fn singular_points_at_sample_masses() {
        let sp = singular_points(&masses((1, 1), (1, 1)), &rat(1)).unwrap();
        assert_eq!(sp.t0, fe_sqrt3(1, 6));
        let expected_t1 = &fe_sqrt3(1, 6) + &(&FieldElement::i() * &fe_ratio(1, 2));
        assert_eq!(sp.t1, expected_t1);
        assert!((sp.t0_c().re - 0.288_675_134_594_812_9).abs() < 1e-15);

        let sp = singular_points(&masses((1, 2), (1, 1)), &rat(1)).unwrap();
        assert_eq!(sp.t0, fe_sqrt3(1, 8));
        let expected_t1 = &fe_sqrt3(1, 8) + &(&FieldElement::i() * &fe_ratio(3, 8));
        assert_eq!(sp.t1, expected_t1);
    }

    #[test]
    fn conjugate_pole_pair_for_any_masses() {
        for (a, b) in [((1, 5), (2, 5)), ((3, 7), (6, 7)), ((1, 10), (1, 5))] {
            let sp = singular_points(&masses(a, b), &ratio(2, 3)).unwrap();
            assert_eq!(sp.t2, sp.t1.conj_i());
            assert_eq!(sp.w4, sp.w3.conj_i());
            // Re t1 = Re t2 = t0 exactly: t1 + conj(t1) = 2 t0
            let twice_re = &sp.t1 + &sp.t2;
            assert_eq!(twice_re, &FieldElement::from_int(2) * &sp.t0);
        }
    }

    #[test]
    fn spectral_data_equal_masses() {
        let sd = spectral_data(&masses((1, 1), (1, 1)));
        assert!(sd.theta.is_zero());
        assert!(sd.bound_ok);
        let expected = (3.0 + 13.0_f64.sqrt()) / 2.0;
        assert!((sd.lambda1 - expected).abs() < 1e-14);
        assert!((sd.lambda2 - expected).abs() < 1e-14);
    }

    #[test]
    fn spectral_data_half_one() {
        let sd = spectral_data(&masses((1, 2), (1, 1)));
        // theta = 144 (1 - 6/6.25) = 144/25 = 5.76
        assert_eq!(sd.theta, fe_ratio(144, 25));
        assert!((sd.sqrt_theta - 2.4).abs() < 1e-14);
        assert!((sd.lambda1 - (1.5 + 0.5 * 15.4_f64.sqrt())).abs() < 1e-14);
        assert!((sd.lambda2 - (1.5 + 0.5 * 10.6_f64.sqrt())).abs() < 1e-14);
        assert!((sd.lambda1 - 3.4621).abs() < 1e-3);
        assert!((sd.lambda2 - 3.1279).abs() < 1e-3);
        assert!(sd.bound_ok);
    }

    #[test]
    fn theta_vanishes_only_when_s1sq_equals_3s2() {
        for (a, b) in [((1, 1), (1, 1)), ((1, 2), (1, 1)), ((1, 5), (3, 5))] {
            let m = masses(a, b);
            let dc = derive_constants(&m);
            let sd = spectral_data(&m);
            let gap = &(&dc.s1 * &dc.s1) - &(&FieldElement::from_int(3) * &dc.s2);
            assert_eq!(sd.theta.is_zero(), gap.is_zero());
        }
    }

    #[test]
    fn lambda_sum_identity() {
        for (a, b) in [((1, 1), (1, 1)), ((1, 5), (2, 5)), ((9, 10), (1, 1))] {
            let sd = spectral_data(&masses(a, b));
            let total = sd.lambda1 + sd.lambda2 + (3.0 - sd.lambda1) + (3.0 - sd.lambda2);
            assert!((total - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn z_vanishes_at_w3_w4_and_l_at_w2() {
        let m = masses((2, 5), (4, 5));
        let k = ratio(3, 2);
        let lc = lagrange_coefficients(&m, &k).unwrap();
        let sp = singular_points(&m, &k).unwrap();
        assert!(lc.z_at(&sp.w3).is_zero());
        assert!(lc.z_at(&sp.w4).is_zero());
        assert!(lc.l_at(&sp.w2).is_zero());
    }

    #[test]
    fn resonance_table() {
        let (rows, no_resonance) = resonance_scan();
        assert_eq!(rows.len(), 12);
        assert!(no_resonance);
        // r = 3: 16 is a square, 10 is not
        assert!(rows[3].plus_is_square && !rows[3].minus_is_square);
        // r = 9: 4 is a square, 22 is not
        assert!(!rows[9].plus_is_square && rows[9].minus_is_square);
        assert!(rows.iter().all(|r| !r.resonant()));
    }
}
