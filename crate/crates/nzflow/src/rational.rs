//! Exact rational arithmetic. Backed by arbitrary-precision integers so
//! half- and 1/k-integrality checks are exact; `Ratio` keeps values in
//! canonical form (positive denominator, reduced) after every operation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// True iff `x` is an integer.
pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// True iff `x` is a multiple of `1/q`.
pub fn is_multiple_of_inverse(x: &Rational, q: i64) -> bool {
    (x * rat(q)).denom().is_one()
}

/// Formats as `num/den`, always with an explicit denominator.
pub fn format_ratio(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().ok()?;
        let den: BigInt = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(num))
    }
}

/// Exact conversion to i64 when integral and in range.
pub fn to_i64(x: &Rational) -> Option<i64> {
    if !is_integral(x) {
        return None;
    }
    i64::try_from(x.numer().clone()).ok()
}

/// |x| as a rational.
pub fn abs(x: &Rational) -> Rational {
    if x.is_negative() {
        -x.clone()
    } else {
        x.clone()
    }
}
