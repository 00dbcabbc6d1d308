use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

use crate::error::{LabError, Result};

/// Ordered field used by the exponent formulas: `f64` for speed, `BigRational`
/// for exact regime boundaries.
pub trait Scalar: Clone + PartialOrd + Num + Signed + fmt::Debug + Send + Sync + 'static {
    fn ratio(n: i64, d: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn quarter() -> Self {
        Self::ratio(1, 4)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn positive_part(self) -> Self {
        if self < Self::zero() {
            Self::zero()
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn ratio(n: i64, d: i64) -> Self {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `"0.6"` or `"1.5e-3"` into
/// an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || LabError::invalid("rational", format!("cannot parse `{s}` as a rational number"));
    let t = s.trim();
    if t.contains('/') {
        let q = BigRational::from_str(t).map_err(|_| bad())?;
        return Ok(q);
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all).map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/3").unwrap(), BigRational::ratio(1, 3));
        assert_eq!(parse_rational("0.6").unwrap(), BigRational::ratio(3, 5));
        assert_eq!(parse_rational("-1.5e-3").unwrap(), BigRational::ratio(-3, 2000));
        assert_eq!(parse_rational("2").unwrap(), BigRational::ratio(2, 1));
        assert_eq!(parse_rational(".25").unwrap(), BigRational::ratio(1, 4));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn helpers() {
        assert_eq!(f64::min_of(0.3, 0.2), 0.2);
        assert_eq!((-0.5f64).positive_part(), 0.0);
        assert_eq!(BigRational::ratio(-1, 3).positive_part(), BigRational::zero());
        assert!((Scalar::to_f64(&BigRational::ratio(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }
}
