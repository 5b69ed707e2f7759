use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{IdmError, Result};

/// Exact probabilities: arbitrary-precision, always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or an integer `"p"`. Decimal and float literals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || IdmError::InvalidProbability(format!("`{s}` is not a rational of the form p/q"));
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let is_int = |t: &str| {
        let d = t.strip_prefix('-').unwrap_or(t);
        !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(p) || !is_int(q) {
        return Err(bad());
    }
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Always `p/q`, so the output never looks like a float.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn scaled(r: &Rational, places: u32) -> Rational {
    r * Rational::from_integer(BigInt::from(10u32).pow(places))
}

fn render(n: BigInt, places: u32) -> String {
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let places = places as usize;
    let padded = format!("{:0>width$}", digits, width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Decimal rendering with ties rounded away from zero.
pub fn round_half_up(r: &Rational, places: u32) -> String {
    let s = scaled(r, places);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let n = if s.is_negative() { -((-s + half).floor()) } else { (s + half).floor() };
    render(n.to_integer(), places)
}

/// Decimal rendering truncated toward zero.
pub fn truncate_decimal(r: &Rational, places: u32) -> String {
    render(scaled(r, places).trunc().to_integer(), places)
}

/// Nearest f64, for display only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
