//! Exact arithmetic in the number field Q(sqrt3, i).
//!
//! Every element is stored as `a + b*sqrt3 + i*(c + d*sqrt3)` with rational
//! `a, b, c, d`, which makes the representation unique and "is this exactly
//! zero?" decidable. All residue-matrix entries, Frobenius recurrence
//! coefficients and symbolic-identity coefficients in this crate live in
//! this field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, ratio, rational_string, rational_to_f64, Rational};

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// An element `a + b*sqrt3 + c*i + d*sqrt3*i` of Q(sqrt3, i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl FieldElement {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::new(rat(0), rat(0), rat(0), rat(0))
    }

    pub fn one() -> Self {
        Self::new(rat(1), rat(0), rat(0), rat(0))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(r, rat(0), rat(0), rat(0))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// `p/q` as a field element.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(ratio(p, q))
    }

    pub fn sqrt3() -> Self {
        Self::new(rat(0), rat(1), rat(0), rat(0))
    }

    pub fn i() -> Self {
        Self::new(rat(0), rat(0), rat(1), rat(0))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the imaginary part vanishes identically.
    pub fn is_real(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }

    /// True when the element is a plain rational.
    pub fn is_rational(&self) -> bool {
        self.is_real() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    /// Complex conjugation `i -> -i`; an involutive field automorphism.
    pub fn conj_i(&self) -> Self {
        Self::new(self.a.clone(), self.b.clone(), -self.c.clone(), -self.d.clone())
    }

    /// The `sqrt3 -> -sqrt3` automorphism; also involutive.
    pub fn conj_sqrt3(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone(), self.c.clone(), -self.d.clone())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(sqrt3, i)");
        // Write z = u + i v with u, v in Q(sqrt3); then 1/z = (u - iv)/(u^2 + v^2)
        // and the Q(sqrt3) inverse is (a - b sqrt3)/(a^2 - 3 b^2).
        let (ua, ub) = (self.a.clone(), self.b.clone());
        let (va, vb) = (self.c.clone(), self.d.clone());
        // n = u^2 + v^2 in Q(sqrt3): (na, nb)
        let na = &ua * &ua + rat(3) * &ub * &ub + &va * &va + rat(3) * &vb * &vb;
        let nb = rat(2) * (&ua * &ub + &va * &vb);
        // invert n in Q(sqrt3)
        let denom = &na * &na - rat(3) * &nb * &nb;
        assert!(!denom.is_zero(), "norm vanished for nonzero element");
        let ia = &na / &denom;
        let ib = -&nb / &denom;
        // (u - iv) * (ia + ib sqrt3)
        let mul_q3 = |xa: &Rational, xb: &Rational| -> (Rational, Rational) {
            (xa * &ia + rat(3) * xb * &ib, xa * &ib + xb * &ia)
        };
        let (ra, rb) = mul_q3(&ua, &ub);
        let (ca, cb) = mul_q3(&(-va), &(-vb));
        Self::new(ra, rb, ca, cb)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate to double precision: `a + b sqrt3 + i (c + d sqrt3)`.
    pub fn eval(&self) -> Complex64 {
        Complex64::new(
            rational_to_f64(&self.a) + SQRT3 * rational_to_f64(&self.b),
            rational_to_f64(&self.c) + SQRT3 * rational_to_f64(&self.d),
        )
    }

    /// Exact sign of a real element (`c = d = 0`): -1, 0 or +1.
    ///
    /// Panics when called on an element with nonzero imaginary part.
    pub fn sign_real(&self) -> i32 {
        assert!(self.is_real(), "sign of a non-real element");
        let a = &self.a;
        let b = &self.b;
        if b.is_zero() {
            return if a.is_zero() {
                0
            } else if a.is_positive() {
                1
            } else {
                -1
            };
        }
        if a.is_zero() {
            return if b.is_positive() { 1 } else { -1 };
        }
        // a + b sqrt3 with a, b nonzero: same signs decide directly,
        // otherwise compare a^2 against 3 b^2.
        let sa = a.is_positive();
        let sb = b.is_positive();
        if sa == sb {
            return if sa { 1 } else { -1 };
        }
        let a2 = a * a;
        let b23 = rat(3) * b * b;
        if a2 == b23 {
            0
        } else if (a2 > b23) == sa {
            1
        } else {
            -1
        }
    }

    pub fn is_positive_real(&self) -> bool {
        self.sign_real() > 0
    }
}

fn add_parts(x: &FieldElement, y: &FieldElement, sign: i64) -> FieldElement {
    let s = rat(sign);
    FieldElement::new(
        &x.a + &s * &y.a,
        &x.b + &s * &y.b,
        &x.c + &s * &y.c,
        &x.d + &s * &y.d,
    )
}

fn mul_parts(x: &FieldElement, y: &FieldElement) -> FieldElement {
    // (u1 + i v1)(u2 + i v2) over Q(sqrt3), with (a,b)*(a',b') =
    // (aa' + 3bb', ab' + a'b).
    let q3 = |xa: &Rational, xb: &Rational, ya: &Rational, yb: &Rational| {
        (xa * ya + rat(3) * xb * yb, xa * yb + xb * ya)
    };
    let (u1a, u1b, v1a, v1b) = (&x.a, &x.b, &x.c, &x.d);
    let (u2a, u2b, v2a, v2b) = (&y.a, &y.b, &y.c, &y.d);
    let (p1a, p1b) = q3(u1a, u1b, u2a, u2b); // u1 u2
    let (p2a, p2b) = q3(v1a, v1b, v2a, v2b); // v1 v2
    let (p3a, p3b) = q3(u1a, u1b, v2a, v2b); // u1 v2
    let (p4a, p4b) = q3(v1a, v1b, u2a, u2b); // v1 u2
    FieldElement::new(p1a - p2a, p1b - p2b, p3a + p4a, p3b + p4b)
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $f:expr) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                $f(self, rhs)
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                $f(&self, &rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                $f(&self, rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                $f(self, &rhs)
            }
        }
    };
}

impl_binop!(Add, add, |x, y| add_parts(x, y, 1));
impl_binop!(Sub, sub, |x, y| add_parts(x, y, -1));
impl_binop!(Mul, mul, mul_parts);
impl_binop!(Div, div, |x: &FieldElement, y: &FieldElement| mul_parts(
    x,
    &y.inv()
));

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut push = |r: &Rational, sym: Option<&str>| {
            if r.is_zero() {
                return;
            }
            let neg = r.is_negative();
            let mag = r.abs();
            if !out.is_empty() {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            match sym {
                None => out.push_str(&rational_string(&mag)),
                Some(s) => {
                    if mag.is_one() {
                        out.push_str(s);
                    } else if mag.denom().is_one() {
                        out.push_str(&format!("{}*{}", mag.numer(), s));
                    } else if mag.numer().is_one() {
                        out.push_str(&format!("{}/{}", s, mag.denom()));
                    } else {
                        out.push_str(&format!("{}*{}/{}", mag.numer(), s, mag.denom()));
                    }
                }
            }
        };
        push(&self.a, None);
        push(&self.b, Some("sqrt3"));
        push(&self.c, Some("i"));
        push(&self.d, Some("i*sqrt3"));
        write!(f, "{out}")
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> FieldElement {
        FieldElement::new(ratio(a.0, a.1), ratio(b.0, b.1), ratio(c.0, c.1), ratio(d.0, d.1))
    }

    #[test]
    fn eval_basis_elements() {
        let one = FieldElement::one().eval();
        assert!((one.re - 1.0).abs() < 1e-15 && one.im == 0.0);
        let s3 = FieldElement::sqrt3().eval();
        assert!((s3.re - 1.732_050_807_568_877_2).abs() < 1e-15 && s3.im == 0.0);
        // (0,0,1,1) = i*(1 + sqrt3)
        let z = fe((0, 1), (0, 1), (1, 1), (1, 1)).eval();
        assert!(z.re.abs() < 1e-15);
        assert!((z.im - 2.732_050_807_568_877_2).abs() < 1e-14);
    }

    #[test]
    fn inverse_and_product() {
        let x = fe((1, 2), (-3, 1), (2, 5), (1, 1));
        let inv = x.inv();
        assert!((&x * &inv).is_one());
        // i * i = -1, sqrt3 * sqrt3 = 3
        assert_eq!(&FieldElement::i() * &FieldElement::i(), -FieldElement::one());
        assert_eq!(
            &FieldElement::sqrt3() * &FieldElement::sqrt3(),
            FieldElement::from_int(3)
        );
    }

    #[test]
    fn conjugations_are_involutive_automorphisms() {
        let x = fe((1, 3), (2, 1), (-1, 2), (4, 7));
        let y = fe((5, 2), (0, 1), (1, 3), (-2, 9));
        assert_eq!(x.conj_i().conj_i(), x);
        assert_eq!(x.conj_sqrt3().conj_sqrt3(), x);
        assert_eq!((&x * &y).conj_i(), &x.conj_i() * &y.conj_i());
        assert_eq!((&x + &y).conj_sqrt3(), &x.conj_sqrt3() + &y.conj_sqrt3());
    }

    #[test]
    fn exact_sign_of_real_elements() {
        // 2 - sqrt3 > 0, 3 - 2 sqrt3 < 0, sqrt3 - 1 > 0
        assert_eq!(fe((2, 1), (-1, 1), (0, 1), (0, 1)).sign_real(), 1);
        assert_eq!(fe((3, 1), (-2, 1), (0, 1), (0, 1)).sign_real(), -1);
        assert_eq!(fe((-1, 1), (1, 1), (0, 1), (0, 1)).sign_real(), 1);
        assert_eq!(FieldElement::zero().sign_real(), 0);
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(fe((2, 9), (0, 1), (0, 1), (0, 1)).to_string(), "2/9");
        assert_eq!(fe((0, 1), (1, 9), (0, 1), (0, 1)).to_string(), "sqrt3/9");
        assert_eq!(
            fe((0, 1), (-3, 2), (0, 1), (0, 1)).to_string(),
            "-3*sqrt3/2"
        );
        assert_eq!(fe((0, 1), (0, 1), (1, 1), (0, 1)).to_string(), "i");
    }
}
