//! Exact rational scalars.
//!
//! Everything in the engine is computed over `BigRational`; there is no
//! floating-point path except for SVG coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-k`.
pub fn dyadic(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

pub fn half(x: &Rational) -> Rational {
    x / int(2)
}

/// Parses `"a"` or `"a/b"`. The second component of the result is `true`
/// when the literal was not in lowest terms (the value is reduced anyway).
pub fn parse_rational(s: &str) -> Result<(Rational, bool)> {
    let t = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().map_err(|_| bad())?,
            d.trim().parse::<BigInt>().map_err(|_| bad())?,
        ),
        None => (t.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(bad());
    }
    let g = num.gcd(&den);
    let unreduced = !g.is_one() || den.is_negative();
    Ok((Rational::new(num, den), unreduced))
}

pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// `(a, b, ...)`, or the bare coordinate in dimension one.
pub fn format_point(x: &[Rational]) -> String {
    if x.len() == 1 {
        return x[0].to_string();
    }
    let parts: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}
