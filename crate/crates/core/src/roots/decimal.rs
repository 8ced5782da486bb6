use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Fixed-point decimal `mantissa / 10^scale`.
#[derive(Clone, Debug)]
pub struct Decimal {
    pub mantissa: BigInt,
    pub scale: u32,
}

fn ten_pow(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), n as usize)
}

impl Decimal {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        Decimal { mantissa, scale }
    }

    /// `q` truncated toward zero to `scale` places.
    pub fn from_rational(q: &BigRational, scale: u32) -> Self {
        let n = q.numer() * ten_pow(scale);
        let (m, _) = n.div_rem(q.denom());
        Decimal::new(m, scale)
    }

    /// `floor(num / 2^bits)` to `scale` places, for nonnegative `num`.
    pub fn from_dyadic(num: &BigInt, bits: u64, scale: u32) -> Self {
        Decimal::new((num * ten_pow(scale)) >> bits, scale)
    }

    fn rescaled(&self, scale: u32) -> BigInt {
        debug_assert!(scale >= self.scale);
        &self.mantissa * ten_pow(scale - self.scale)
    }

    pub fn abs(&self) -> Self {
        Decimal::new(self.mantissa.abs(), self.scale)
    }

    pub fn sub(&self, other: &Decimal) -> Self {
        let s = self.scale.max(other.scale);
        Decimal::new(self.rescaled(s) - other.rescaled(s), s)
    }

    /// Drops digits beyond `scale` (truncation toward zero).
    pub fn truncate(&self, scale: u32) -> Self {
        if scale >= self.scale {
            return Decimal::new(self.rescaled(scale), scale);
        }
        let d = ten_pow(self.scale - scale);
        let q = self.mantissa.abs() / d;
        Decimal::new(if self.mantissa.is_negative() { -q } else { q }, scale)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), ten_pow(self.scale))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().expect("decimal string is a valid float")
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl PartialEq for Decimal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Decimal {}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = self.scale.max(other.scale);
        self.rescaled(s).cmp(&other.rescaled(s))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.abs().to_string();
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let scale = self.scale as usize;
        if scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let padded = format!("{digits:0>width$}", width = scale + 1);
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int}.{frac}")
    }
}

impl FromStr for Decimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a decimal: {s:?}"));
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let m: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        Ok(Decimal::new(if neg { -m } else { m }, frac.len() as u32))
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn display_round_trip() {
        for s in ["0.000123", "-1.5", "42", "1.1762808182", "-0.0"] {
            let back = d(s).to_string();
            assert_eq!(d(&back), d(s));
        }
        assert_eq!(d("0.000123").to_string(), "0.000123");
        assert_eq!(Decimal::new(BigInt::from(-5), 3).to_string(), "-0.005");
        assert!("1.2.3".parse::<Decimal>().is_err());
        assert!(".5".parse::<Decimal>().is_err());
    }

    #[test]
    fn arithmetic_and_order() {
        assert_eq!(d("1.25").sub(&d("2")), d("-0.75"));
        assert_eq!(d("-0.75").abs(), d("0.75"));
        assert!(d("1.0001") > d("1.0"));
        assert_eq!(d("1.50"), d("1.5"));
        assert_eq!(d("-1.59").truncate(1), d("-1.5"));
    }

    #[test]
    fn dyadic_conversion() {
        // 3/8 = 0.375
        assert_eq!(Decimal::from_dyadic(&BigInt::from(3), 3, 2).to_string(), "0.37");
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(Decimal::from_rational(&q, 5).to_string(), "0.33333");
    }
}
