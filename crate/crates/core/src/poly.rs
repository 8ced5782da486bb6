//! Dense univariate polynomials over arbitrary-precision integers.
//!
//! Coefficients are stored low degree first with trailing zeros trimmed, so
//! the zero polynomial is the empty vector and has no degree
//! ([`IntPoly::degree`] returns `None`).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Operand length (in coefficients) above which [`IntPoly::mul`] switches to
/// Karatsuba. Measured with `starlike-bench`: schoolbook wins below this for
/// the small coefficients that show up here.
pub const KARATSUBA_THRESHOLD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c * x^n`
    pub fn monomial(c: impl Into<BigInt>, n: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = c;
        IntPoly { coeffs }
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] -= 1;
        coeffs[n] += 1;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Coefficients, index `i` holding the coefficient of `x^i`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// `x^k * self`
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `self(x^e)`
    pub fn substitute_power(&self, e: usize) -> Self {
        assert!(e > 0, "substitute_power needs a positive exponent");
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let mut coeffs = vec![BigInt::zero(); d * e + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * e] = c.clone();
        }
        IntPoly { coeffs }
    }

    /// `self(-x)`
    pub fn negate_variable(&self) -> Self {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// `x^deg * self(1/x)`
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::from_coeffs(coeffs)
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_schoolbook(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(schoolbook(&self.coeffs, &other.coeffs))
    }

    pub fn mul_karatsuba(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(karatsuba(&self.coeffs, &other.coeffs))
    }

    /// Integer long division. Returns `None` when some quotient step is not
    /// an integer, i.e. when `self` is not an integral combination of `g`'s
    /// multiples (only possible for non-monic `g`).
    ///
    /// Cost is linear in the number of nonzero coefficients of `g`, which is
    /// what makes division by binomials such as `x^d - 1` cheap.
    pub fn try_div_rem(&self, g: &Self) -> Option<(Self, Self)> {
        let dg = g.degree().expect("division by the zero polynomial");
        if self.coeffs.len() <= dg {
            return Some((Self::zero(), self.clone()));
        }
        let lc = &g.coeffs[dg];
        let lower: Vec<(usize, &BigInt)> = g.coeffs[..dg]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dg;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = std::mem::take(&mut rem[i + dg]);
            if top.is_zero() {
                continue;
            }
            let t = if lc.is_one() {
                top
            } else {
                let (t, r) = top.div_rem(lc);
                if !r.is_zero() {
                    return None;
                }
                t
            };
            for &(j, gj) in &lower {
                if gj.is_one() {
                    rem[i + j] -= &t;
                } else if (-gj).is_one() {
                    rem[i + j] += &t;
                } else {
                    rem[i + j] -= &t * gj;
                }
            }
            quot[i] = t;
        }
        rem.truncate(dg);
        Some((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Returns `q` with `self = q * g`, or [`Error::NotDivisible`].
    pub fn exact_div(&self, g: &Self) -> Result<Self> {
        match self.try_div_rem(g) {
            Some((q, r)) if r.is_zero() => Ok(q),
            _ => Err(Error::NotDivisible {
                dividend: self.clone(),
                divisor: g.clone(),
            }),
        }
    }

    /// Whether `self` divides `f` in `Z[x]`.
    pub fn divides(&self, f: &Self) -> bool {
        if f.is_zero() {
            return true;
        }
        if f.degree() < self.degree() {
            return false;
        }
        matches!(f.try_div_rem(self), Some((_, r)) if r.is_zero())
    }

    pub fn eval_int(&self, v: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * v + c)
    }

    pub fn eval_rational(&self, v: &BigRational) -> BigRational {
        // Horner over the common denominator keeps this to one division.
        let (num, den) = (v.numer(), v.denom());
        let Some(d) = self.degree() else {
            return BigRational::zero();
        };
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        BigRational::new(acc, num_traits::pow(den.clone(), d))
    }

    /// `2^{bits * deg} * self(num / 2^bits)`, an exact integer.
    pub fn eval_dyadic_scaled(&self, num: &BigInt, bits: u64) -> BigInt {
        let mut acc = BigInt::zero();
        let mut shift = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = acc * num + (c << shift);
            shift += bits;
        }
        acc
    }

    /// Sign of `self(num / 2^bits)`, computed exactly.
    pub fn sign_at_dyadic(&self, num: &BigInt, bits: u64) -> i8 {
        match self.eval_dyadic_scaled(num, bits).sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * z + c.to_f64().unwrap_or(f64::NAN)
            })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `n`-th derivative.
    pub fn derivative(&self, n: usize) -> Self {
        if n == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= n {
            return Self::zero();
        }
        let coeffs = (n..self.coeffs.len())
            .map(|i| {
                // i (i-1) ... (i-n+1)
                let falling: BigInt = ((i - n + 1)..=i).map(BigInt::from).product();
                &self.coeffs[i] * falling
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Naive height: the largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Number of nonzero coefficients.
    pub fn length(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Sum of absolute coefficients; bounds `|f(z)|` on the closed unit disk.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Coefficients read the same in both directions.
    pub fn is_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// `self(x + 1)`
    pub fn taylor_shift_one(&self) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let hi = c[j + 1].clone();
                c[j] += hi;
            }
        }
        Self::from_coeffs(c)
    }

    /// Sign changes in the coefficient sequence (zeros skipped).
    pub fn sign_variations(&self) -> usize {
        let signs: Vec<bool> = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Low-to-high decimal strings, the coefficient form used in every
    /// machine-readable output.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coeff_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        items
            .iter()
            .map(|s| {
                s.as_ref()
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::InvalidArgument(format!("bad coefficient {:?}: {e}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_coeffs)
    }
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn add_into(acc: &mut [BigInt], src: &[BigInt], offset: usize) {
    for (i, c) in src.iter().enumerate() {
        acc[offset + i] += c;
    }
}

fn padded_sum(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    add_into(&mut out, a, 0);
    add_into(&mut out, b, 0);
    out
}

fn karatsuba(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len() < KARATSUBA_THRESHOLD || b.len() < KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    let m = a.len().max(b.len()) / 2;
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    if a.len() <= m || b.len() <= m {
        // Unbalanced: split only the longer operand.
        let (short, long) = if a.len() <= m { (a, b) } else { (b, a) };
        let (l0, l1) = long.split_at(m);
        add_into(&mut out, &karatsuba(short, l0), 0);
        add_into(&mut out, &karatsuba(short, l1), m);
        return out;
    }
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let mut z1 = karatsuba(&padded_sum(a0, a1), &padded_sum(b0, b1));
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    add_into(&mut out, &z0, 0);
    add_into(&mut out, &z2, 2 * m);
    // z1 may carry high zero padding past the product length.
    let z1_len = z1.len().min(out.len() - m);
    add_into(&mut out, &z1[..z1_len], m);
    out
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::from_coeffs(padded_sum(&self.coeffs, &rhs.coeffs))
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        add_into(&mut out, &self.coeffs, 0);
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        IntPoly::from_coeffs(out)
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.coeffs.len() < KARATSUBA_THRESHOLD || rhs.coeffs.len() < KARATSUBA_THRESHOLD {
            self.mul_schoolbook(rhs)
        } else {
            self.mul_karatsuba(rhs)
        }
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

impl AddAssign<&IntPoly> for IntPoly {
    fn add_assign(&mut self, rhs: &IntPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        add_into(&mut self.coeffs, &rhs.coeffs, 0);
        self.trim();
    }
}

impl SubAssign<&IntPoly> for IntPoly {
    fn sub_assign(&mut self, rhs: &IntPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[i] -= c;
        }
        self.trim();
    }
}

impl std::iter::Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::one(), |acc, p| &acc * &p)
    }
}

/// Renders as `c_d*x^d + ... + c_1*x + c_0`, zero terms omitted.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*x")?,
                _ => write!(f, "{mag}*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_coeff_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        IntPoly::from_coeff_strings(&items).map_err(D::Error::custom)
    }
}
