//! Exact rational helpers and the `p/q` text form used in every output file.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// Always `p/q`, including integers (`2/1`).
pub fn format_ratio(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse_ratio(text: &str) -> Result<Rational> {
    let text = text.trim();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational: {text:?}")))
    };
    match text.split_once('/') {
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, denom))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

/// Nearest double; handles numerators and denominators beyond `f64` range.
pub fn to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both sides down by a common power of two.
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
    let n = (q.numer().abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let v = if d == 0.0 { f64::INFINITY } else { n / d };
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// Rounds to 15 significant digits.
pub fn round_sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}
