//! Exact rational helpers: parsing `p/q`, decimal rendering and logarithms.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distr::Bernoulli;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Parses `p/q` or a bare integer `p`. Decimal notation is rejected so that
/// every rational entering the library is exact.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Some(pos) = text.find('.') {
        return Err(Error::parse(pos, "decimal notation is not accepted, use p/q"));
    }
    let (num, den, den_offset) = match text.split_once('/') {
        Some((n, d)) => (n, d, n.len() + 1),
        None => (text, "1", 0),
    };
    let num: BigInt = num.trim().parse().map_err(|_| Error::parse(0, format!("invalid numerator {num:?}")))?;
    let den: BigInt = den.trim().parse().map_err(|_| Error::parse(den_offset, format!("invalid denominator {den:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(den_offset, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Lowest-terms `p/q` form; integers print without a denominator.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal expansion truncated toward zero after `digits` fractional digits.
pub fn format_decimal(r: &BigRational, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().abs();
    let den = r.denom().clone();
    let (int, rem) = num.div_rem(&den);
    if digits == 0 {
        return format!("{sign}{int}");
    }
    let scale = BigInt::from(10u32).pow(digits as u32);
    let frac = rem * scale / den;
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational; `None` if `r <= 0`.
pub fn ln_rational(r: &BigRational) -> Option<f64> {
    if !r.is_positive() {
        return None;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    Some(ln_biguint(num) - ln_biguint(den))
}

pub fn to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    match ln_rational(&r.abs()) {
        None => 0.0,
        Some(l) if r.is_negative() => -l.exp(),
        Some(l) => l.exp(),
    }
}

/// An exact probability in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(BigRational);

impl Probability {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::InvalidArgument(format!("probability {} is outside [0, 1]", format_rational(&value))));
        }
        Ok(Probability(value))
    }

    pub fn from_ratio(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_rational(text)?)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// 1 − p.
    pub fn complement(&self) -> BigRational {
        BigRational::one() - &self.0
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Exact Bernoulli sampler when numerator and denominator fit in u32,
    /// otherwise the nearest f64 probability.
    pub fn bernoulli(&self) -> Bernoulli {
        let exact = self.0.numer().to_u32().zip(self.0.denom().to_u32()).and_then(|(n, d)| Bernoulli::from_ratio(n, d).ok());
        exact.unwrap_or_else(|| Bernoulli::new(self.to_f64()).expect("probability in [0, 1]"))
    }
}

impl std::fmt::Display for Probability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Serializes a rational as its `p/q` string.
pub fn serialize_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_rational("6/4").unwrap(), q(3, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), q(3, 1));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        assert!(matches!(parse_rational("0.5"), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_rational("1/0"), Err(Error::Parse { position: 2, .. })));
        assert!(parse_rational("a/2").is_err());
    }

    #[test]
    fn formats() {
        assert_eq!(format_rational(&q(3, 2)), "3/2");
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_decimal(&q(3, 2), 4), "1.5000");
        assert_eq!(format_decimal(&q(1, 3), 6), "0.333333");
        assert_eq!(format_decimal(&q(-1, 8), 3), "-0.125");
        assert_eq!(format_decimal(&q(7, 1), 0), "7");
    }

    #[test]
    fn logs() {
        assert!((ln_rational(&q(1, 2)).unwrap() + std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(ln_rational(&q(0, 1)), None);
        let huge = BigUint::from(10u32).pow(2000);
        assert!((ln_biguint(&huge) - 2000.0 * 10f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn probability_bounds() {
        assert!(Probability::parse("3/2").is_err());
        assert!(Probability::parse("-1/2").is_err());
        let p = Probability::parse("1/4").unwrap();
        assert_eq!(p.complement(), q(3, 4));
        assert_eq!(p.to_string(), "1/4");
        assert_eq!(p.to_f64(), 0.25);
    }
}
