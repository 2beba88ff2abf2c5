//! Arbitrary-precision rationals and parsing helpers.
//!
//! `Rational` is `num_rational::BigRational`: always reduced, denominator
//! positive, canonical zero `0/1`. The helpers here cover the small-integer
//! constructors used throughout the exact layer and the CLI's `p/q` /
//! decimal-literal input formats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `n` as a rational.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p/q` as a rational. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `"p/q"`, an integer literal, or a decimal literal (`0.1` -> `1/10`).
///
/// Decimal input is converted digit-for-digit, so the exact layer never sees
/// binary floating-point artifacts.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let den: BigInt = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.is_empty()
        {
            return Err(format!("bad decimal literal {s:?}"));
        }
        let digits = format!("{int_digits}{frac_part}");
        let num: BigInt = digits.parse().map_err(|_| format!("bad digits in {s:?}"))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let val = BigRational::new(num, den);
        return Ok(if negative { -val } else { val });
    }
    let num: BigInt = s.parse().map_err(|_| format!("bad integer literal {s:?}"))?;
    Ok(BigRational::from_integer(num))
}

/// Render as `"p"` or `"p/q"`.
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest f64 (numerator / denominator in floating point).
pub fn rational_to_f64(r: &Rational) -> f64 {
    // Good to ~1 ulp for the magnitudes seen here; exact checks never go
    // through this path.
    let num = r.numer();
    let den = r.denom();
    let approx = |x: &BigInt| -> f64 {
        let s = x.to_string();
        s.parse::<f64>().unwrap_or(if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
    };
    approx(num) / approx(den)
}
