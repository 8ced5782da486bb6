//! The constant `m(a0, a2 - a1)` bounding the multiplicity of unit-circle
//! roots of `P` for three-arm trees.
//!
//! With `P~ = P / (z - 1) = z^{a1+a2} Q~ + z^{a1+1} R~ + S~`, the `n`-th
//! derivative of `P~` is bounded away from zero on `|z| = 1` once
//! `a1 + a2` is large. Every constant entering that estimate is computed
//! here with a rigorous upper or lower bound, so the final `m` is
//! certified rather than estimated.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

#[derive(Clone, Copy, Debug)]
pub struct CertifyConfig {
    /// Circle samples on the first attempt; doubled until certification
    /// succeeds.
    pub initial_points: u64,
    pub max_points: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            initial_points: 1 << 10,
            max_points: 1 << 26,
        }
    }
}

pub(crate) fn rational_str<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn bigint_str<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityBoundTrace {
    pub a0: u32,
    pub delta: u32,
    /// Certified lower bound for `min_{|z|=1} |Q~(z)|`.
    #[serde(serialize_with = "rational_str")]
    pub eta_lower: BigRational,
    pub sample_points: u64,
    /// `sum |coeff|` of `R~`, bounding `max_{|z|=1} |R~|`.
    #[serde(serialize_with = "rational_str")]
    pub f0_upper: BigRational,
    /// `max_{1<=k<=n0}` coefficient sums of `Q~^{(k)}`.
    #[serde(serialize_with = "rational_str")]
    pub en_upper: BigRational,
    /// `max_{1<=k<=n0}` coefficient sums of `R~^{(k)}`.
    #[serde(serialize_with = "rational_str")]
    pub fn_upper: BigRational,
    /// Coefficient sum of `S~^{(n0)}`.
    #[serde(serialize_with = "rational_str")]
    pub gn_upper: BigRational,
    pub n0: u32,
    /// For `a1 + a2 > c` the derivative estimate is strictly positive.
    #[serde(serialize_with = "bigint_str")]
    pub c: BigInt,
    #[serde(serialize_with = "bigint_str")]
    pub m: BigInt,
}

impl MultiplicityBoundTrace {
    /// `eta - 2^{1-n0} F0`
    pub fn leading_margin(&self) -> BigRational {
        leading_margin(&self.eta_lower, &self.f0_upper, self.n0)
    }

    /// The full estimate with `a1 + a2 = s`; positive means the `n0`-th
    /// derivative of `P~` has no zero on the unit circle.
    pub fn estimate(&self, s: &BigInt) -> BigRational {
        estimate(self, s)
    }
}

fn blocks(a0: u32, delta: u32) -> (IntPoly, IntPoly, IntPoly) {
    let (a0, d) = (a0 as usize, delta as usize);
    let mut q = IntPoly::monomial(1, a0 + 1);
    q -= &IntPoly::monomial(2, a0);
    q += &IntPoly::one();
    let mut r = IntPoly::monomial(1, d + a0 - 1);
    r -= &IntPoly::monomial(1, d);
    r += &IntPoly::monomial(1, a0 - 1);
    r -= &IntPoly::one();
    let mut s = IntPoly::monomial(-1, a0 + 1);
    s += &IntPoly::monomial(2, 1);
    s -= &IntPoly::one();
    let x_minus_one = IntPoly::from_i64s(&[-1, 1]);
    let reduce = |p: IntPoly| p.exact_div(&x_minus_one).expect("block vanishes at 1");
    (reduce(q), reduce(r), reduce(s))
}

fn to_rational(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

// 355/113 > pi, with the error margin of a few f64 evaluations far below
// the 1e-9 slack subtracted from the sampled minimum.
fn pi_upper() -> BigRational {
    BigRational::new(BigInt::from(355), BigInt::from(113))
}

/// Certified lower bound on `min_{|z|=1} |f(z)|`.
///
/// Samples `N` equispaced points; any circle point is within arc length
/// `pi / N` of a sample and `|f'| <= sum k |c_k|` on the circle, so
/// `min_sample - L pi / N` bounds the minimum from below. The sampled
/// minimum is computed in `f64` and lowered by `1e-9` to absorb rounding.
/// `N` doubles until the bound is positive and the Lipschitz term is at most
/// an eighth of the sampled minimum; at the cap the best positive bound
/// found is returned.
pub fn circle_min_lower_bound(f: &IntPoly, cfg: &CertifyConfig) -> Result<(BigRational, u64)> {
    let lipschitz: BigInt = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * BigInt::from(k))
        .sum();
    let lipschitz = to_rational(lipschitz);
    let slack = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
    let mut n = cfg.initial_points.max(1);
    let mut best = None;
    while n <= cfg.max_points {
        let min = (0..n)
            .map(|j| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                f.eval_complex(z).norm()
            })
            .fold(f64::INFINITY, f64::min);
        if let Some(sampled) = BigRational::from_float(min) {
            let spread = &lipschitz * pi_upper() / to_rational(BigInt::from(n));
            let bound = &sampled - &slack - &spread;
            if bound.is_positive() {
                let tight = spread * BigInt::from(8) <= sampled;
                best = Some((bound, n));
                if tight {
                    break;
                }
            }
        }
        n *= 2;
    }
    best.ok_or(Error::Certification {
        points: cfg.max_points,
    })
}

fn pow2(e: i64) -> BigRational {
    let p = to_rational(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

fn leading_margin(eta: &BigRational, f0: &BigRational, n0: u32) -> BigRational {
    eta - pow2(1 - i64::from(n0)) * f0
}

/// Falling factorial `s (s-1) ... (s-n+1)`.
fn falling(s: &BigInt, n: u32) -> BigInt {
    (0..n).map(|i| s - i).product()
}

fn estimate(t: &MultiplicityBoundTrace, s: &BigInt) -> BigRational {
    let n0 = t.n0;
    assert!(*s >= BigInt::from(n0), "estimate needs a1 + a2 >= n0");
    let spread = pow2(i64::from(n0) - 1) * (&t.en_upper + &t.fn_upper)
        / to_rational(s - n0 + 1u32);
    let tail = &t.gn_upper / to_rational(falling(s, n0));
    t.leading_margin() - spread - tail
}

fn max_derivative_norm(f: &IntPoly, n: u32) -> BigInt {
    (1..=n as usize)
        .map(|k| f.derivative(k).l1_norm())
        .max()
        .unwrap_or_default()
}

pub fn multiplicity_bound(a0: u32, delta: u32) -> Result<MultiplicityBoundTrace> {
    multiplicity_bound_with(a0, delta, &CertifyConfig::default())
}

/// Computes `m(a0, delta)` and every intermediate constant.
///
/// `n0` is the least `n` with `eta - 2^{1-n} F0 > 0`; `c` is the least value
/// such that the estimate is positive for every `a1 + a2 > c` (the estimate
/// increases with `a1 + a2`, so a binary search finds it); and
/// `m = max(n0, c + a0) + 1`.
pub fn multiplicity_bound_with(
    a0: u32,
    delta: u32,
    cfg: &CertifyConfig,
) -> Result<MultiplicityBoundTrace> {
    if a0 < 2 || delta < 1 {
        return Err(Error::InvalidArgument(format!(
            "multiplicity bound needs a0 >= 2 and delta >= 1, got ({a0}, {delta})"
        )));
    }
    let (q, r, s) = blocks(a0, delta);
    let (eta_lower, sample_points) = circle_min_lower_bound(&q, cfg)?;
    let f0_upper = to_rational(r.l1_norm());

    let mut n0 = 1u32;
    while !leading_margin(&eta_lower, &f0_upper, n0).is_positive() {
        n0 += 1;
    }

    let mut trace = MultiplicityBoundTrace {
        a0,
        delta,
        eta_lower,
        sample_points,
        f0_upper,
        en_upper: to_rational(max_derivative_norm(&q, n0)),
        fn_upper: to_rational(max_derivative_norm(&r, n0)),
        gn_upper: to_rational(s.derivative(n0 as usize).l1_norm()),
        n0,
        c: BigInt::zero(),
        m: BigInt::zero(),
    };

    let lo = BigInt::from(n0);
    let c = if trace.estimate(&lo).is_positive() {
        lo - 1u32
    } else {
        // estimate(lo) <= 0: grow hi until positive, then bisect.
        let mut bad = lo.clone();
        let mut good = lo * 2u32;
        while !trace.estimate(&good).is_positive() {
            bad = good.clone();
            good *= 2u32;
        }
        while &good - &bad > BigInt::one() {
            let mid: BigInt = (&bad + &good) >> 1;
            if trace.estimate(&mid).is_positive() {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good - 1u32
    };
    trace.m = BigInt::from(n0).max(&c + a0) + 1u32;
    trace.c = c;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn approx(v: &BigRational) -> f64 {
        v.to_f64().unwrap_or(f64::NAN)
    }

    #[test]
    fn reduced_blocks() {
        let (q, r, s) = blocks(2, 1);
        assert_eq!(q, IntPoly::from_i64s(&[-1, -1, 1]));
        // R = z^2 - z + z - 1 = z^2 - 1, so R~ = z + 1
        assert_eq!(r, IntPoly::from_i64s(&[1, 1]));
        assert_eq!(s, IntPoly::from_i64s(&[1, -1, -1]));
        let (q, r, _) = blocks(4, 3);
        assert_eq!(q, crate::coxeter::mbonacci_poly(4).unwrap());
        // (z^3 + 1)(z^2 + z + 1)
        assert_eq!(r, IntPoly::from_i64s(&[1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn eta_for_golden_ratio_block() {
        // min over the circle of |z^2 - z - 1| = sqrt(1 + 4 sin^2) is 1;
        // a 10^6-point scan agrees to 1e-12.
        let (q, _, _) = blocks(2, 1);
        let (eta, n) = circle_min_lower_bound(&q, &CertifyConfig::default()).unwrap();
        assert!(eta.is_positive() && approx(&eta) < 1.0);
        // L = 3, so 1024 points already give 1 - 3 pi / 1024 > 0.99.
        assert_eq!(n, 1024);
        assert!(approx(&eta) > 0.99);
    }

    #[test]
    fn eta_against_dense_scan() {
        // 10^6-point scans of |M_a0| on the circle
        let scans = [(3, 0.959_582_494_8), (4, 0.893_502_203_6), (5, 0.825_664_235_7), (6, 0.761_510_767_6)];
        for (a0, scan) in scans {
            let (q, _, _) = blocks(a0, 1);
            let (eta, _) = circle_min_lower_bound(&q, &CertifyConfig::default()).unwrap();
            let eta = approx(&eta);
            assert!(eta > 0.0 && eta <= scan, "a0 = {a0}: {eta} vs {scan}");
        }
    }

    #[test]
    fn certification_failure_is_reported() {
        // z^2 + 1 vanishes on the circle
        let f = IntPoly::from_i64s(&[1, 0, 1]);
        let cfg = CertifyConfig {
            initial_points: 8,
            max_points: 1 << 12,
        };
        assert!(matches!(
            circle_min_lower_bound(&f, &cfg),
            Err(Error::Certification { points: 4096 })
        ));
        // A cap too small for a legitimate polynomial fails too.
        let tight = CertifyConfig {
            initial_points: 2,
            max_points: 4,
        };
        assert!(multiplicity_bound_with(6, 1, &tight).is_err());
    }

    #[test]
    fn trace_for_a0_2_delta_1() {
        let t = multiplicity_bound(2, 1).unwrap();
        assert_eq!(t.f0_upper, to_rational(BigInt::from(2)));
        // 1 - 2^{1-n} * 2 > 0 first at n = 3 (eta just below 1)
        assert_eq!(t.n0, 3);
        assert!(t.m >= BigInt::one());
    }

    #[test]
    fn trace_invariants() {
        for a0 in 2..=6 {
            for delta in 1..=5 {
                let t = multiplicity_bound(a0, delta).unwrap();
                assert!(t.eta_lower.is_positive());
                assert!(t.leading_margin().is_positive());
                if t.n0 > 1 {
                    assert!(!leading_margin(&t.eta_lower, &t.f0_upper, t.n0 - 1).is_positive());
                }
                let n0 = BigInt::from(t.n0);
                assert!(&t.c + 1u32 >= n0);
                assert!(t.estimate(&(&t.c + 1u32)).is_positive());
                if t.c >= n0 {
                    assert!(!t.estimate(&t.c).is_positive());
                }
                assert!(t.estimate(&(&t.c + 1000u32)).is_positive());
                assert_eq!(t.m, n0.max(&t.c + a0) + 1u32);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(multiplicity_bound(1, 3).is_err());
        assert!(multiplicity_bound(3, 0).is_err());
    }

    #[test]
    fn falling_factorial() {
        assert_eq!(falling(&BigInt::from(5), 3), BigInt::from(60));
        assert_eq!(falling(&BigInt::from(7), 0), BigInt::from(1));
        assert!(pow2(-2) == BigRational::new(BigInt::one(), BigInt::from(4)));
        assert!(BigRational::zero() < pow2(-70));
    }
}
