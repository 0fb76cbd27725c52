//! Exact rationals and the Jack parameter.
//!
//! Every probability, moment and content in the crate is carried as a
//! [`Rational`]. Text form is always `p/q` (`q` may be `1`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical `p/q` text form of a rational.
pub fn to_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `p/q` or a bare integer. Decimals are rejected.
pub fn parse(text: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("expected an integer or p/q rational, got {text:?}"));
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| bad())?;
    let q = BigInt::from_str(q).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(p, q))
}

pub fn to_f64(r: &Rational) -> f64 {
    // BigRational::to_f64 rounds correctly for large operands as well.
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

pub fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Serialize a rational as its `p/q` string.
pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_text(r))
}

pub fn serialize_opt<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&to_text(r)),
        None => s.serialize_none(),
    }
}

/// The Jack parameter α > 0, held exactly with a double view for sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaParam {
    value: Rational,
    float_view: f64,
}

impl AlphaParam {
    pub fn new(value: Rational) -> Result<Self, Error> {
        if !value.is_positive() {
            return Err(Error::Domain(format!(
                "alpha must be positive, got {}",
                to_text(&value)
            )));
        }
        let float_view = to_f64(&value);
        Ok(AlphaParam { value, float_view })
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(ratio(p, q)).expect("alpha must be positive")
    }

    pub fn one() -> Self {
        Self::from_ratio(1, 1)
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn float_view(&self) -> f64 {
        self.float_view
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// 1/α, the parameter of the transposed measure.
    pub fn recip(&self) -> Self {
        Self::new(self.value.recip()).expect("reciprocal of a positive rational")
    }

    /// Numerator and denominator as machine integers, when they fit.
    pub fn as_small_ratio(&self) -> Option<(i64, i64)> {
        Some((self.value.numer().to_i64()?, self.value.denom().to_i64()?))
    }
}

impl FromStr for AlphaParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlphaParam::new(parse(s)?)
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_text(&self.value))
    }
}

impl Serialize for AlphaParam {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize(&self.value, s)
    }
}

/// The α values every exact identity is checked at.
pub fn sample_alphas() -> Vec<AlphaParam> {
    vec![
        AlphaParam::from_ratio(1, 1),
        AlphaParam::from_ratio(2, 1),
        AlphaParam::from_ratio(1, 2),
        AlphaParam::from_ratio(3, 2),
        AlphaParam::from_ratio(5, 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse("4").unwrap(), int(4));
        assert_eq!(parse(" 6/4 ").unwrap(), ratio(3, 2));
        assert!(parse("1.5").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn text_is_always_p_over_q() {
        assert_eq!(to_text(&int(3)), "3/1");
        assert_eq!(to_text(&ratio(-2, 4)), "-1/2");
    }

    #[test]
    fn alpha_rejects_nonpositive() {
        assert!("0".parse::<AlphaParam>().is_err());
        assert!("-1/2".parse::<AlphaParam>().is_err());
        let a: AlphaParam = "3/2".parse().unwrap();
        assert_eq!(a.float_view(), 1.5);
        assert_eq!(a.recip().value(), &ratio(2, 3));
    }

    #[test]
    fn float_view_within_one_ulp() {
        for (p, q) in [(1, 3), (2, 7), (5, 1), (22, 7), (1, 10)] {
            let a = AlphaParam::from_ratio(p, q);
            let exact = p as f64 / q as f64;
            assert!((a.float_view() - exact).abs() <= f64::EPSILON * exact);
        }
    }
}
