//! Dominant roots to arbitrary precision.
//!
//! The root is bracketed in exact dyadic arithmetic: every sign test is an
//! integer evaluation of `2^{B d} f(X / 2^B)`, so the returned bracket
//! provably contains a root. Newton steps are taken in the same fixed-point
//! representation and fall back to bisection whenever they leave the bracket
//! or fail to halve the previous step.

pub mod aberth;
mod converge;
mod decimal;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::coxeter::spectral_radius;
use crate::error::{Error, Result};
use crate::factorize::{Classification, CoxeterFactorization};
use crate::poly::IntPoly;

pub use converge::{converge_general, converge_mbonacci, gaps_strictly_decrease, ConvergenceRecord};
pub use decimal::Decimal;

/// Root accepted as "the" dominant one must exceed `1 + 2^-20`.
const LOWER_EXPONENT: u64 = 20;
/// Guard bits on top of `digits * log2(10)`.
const GUARD_BITS: u64 = 32;

fn bracket_str<S: Serializer>(
    v: &(BigRational, BigRational),
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&v.0.to_string())?;
    t.serialize_element(&v.1.to_string())?;
    t.end()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominantRoot {
    /// truncated toward zero to the requested number of places
    pub tau: Decimal,
    /// width `2^-bits`, sign change of `f` across it
    #[serde(serialize_with = "bracket_str")]
    pub bracket: (BigRational, BigRational),
    pub bits: u64,
}

impl DominantRoot {
    pub fn midpoint(&self) -> BigRational {
        (&self.bracket.0 + &self.bracket.1) / BigInt::from(2)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

fn sign(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// The real root of `f` in `(1 + 2^-20, 2 + H]`, `H` the height over the
/// leading coefficient, to `digits` decimal places.
///
/// The caller is responsible for that root being unique (as it is for a
/// Salem or quadratic Pisot factor); the procedure only needs a sign change
/// across the interval and fails with [`Error::NoSignChange`] otherwise.
pub fn dominant_root(f: &IntPoly, digits: u32) -> Result<DominantRoot> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::NoSignChange(f.clone()));
    }
    let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u64 + GUARD_BITS;
    let one = BigInt::one() << bits;
    let lead = f.leading().expect("nonconstant").abs();
    let cauchy = (f.height() + &lead - 1u32) / &lead + 2u32;

    let mut lo = &one + (&one >> LOWER_EXPONENT);
    let mut hi = cauchy << bits;
    let s_lo = f.sign_at_dyadic(&lo, bits);
    let s_hi = f.sign_at_dyadic(&hi, bits);
    if s_lo == 0 || s_hi == 0 || s_lo == s_hi {
        return Err(Error::NoSignChange(f.clone()));
    }
    let df = f.derivative(1);
    let at = |x: &BigInt| f.eval_dyadic_scaled(x, bits);

    let mut x: BigInt = (&lo + &hi) >> 1;
    let mut dx_old: BigInt = &hi - &lo;
    let mut dx = dx_old.clone();
    let mut exact = false;
    // Bisection alone needs about log2(width) steps; leave room for Newton.
    let cap = 4 * (bits + 64);
    for _ in 0..cap {
        let fx = at(&x);
        match sign(&fx) {
            0 => {
                exact = true;
                break;
            }
            s if s == s_lo => lo = x.clone(),
            _ => hi = x.clone(),
        }
        if &hi - &lo <= BigInt::one() {
            break;
        }
        let dfx = df.eval_dyadic_scaled(&x, bits);
        let newton = (!dfx.is_zero()).then(|| &fx / &dfx);
        let accepted = newton.and_then(|step| {
            let cand = &x - &step;
            let inside = cand > lo && cand < hi;
            let shrinking = (&step * 2u32).abs() <= dx_old.abs();
            (inside && shrinking).then_some((cand, step))
        });
        dx_old = dx;
        match accepted {
            Some((cand, step)) => {
                dx = step;
                x = cand;
                if dx.is_zero() {
                    break;
                }
            }
            None => {
                dx = (&hi - &lo) >> 1;
                x = &lo + &dx;
            }
        }
    }

    if exact {
        lo = x.clone();
        hi = x;
    } else {
        // Newton lands within a few units of the root; gallop away from
        // whichever endpoint `x` sits on to close the other side.
        let toward_hi = x == lo || (x != hi && f.sign_at_dyadic(&x, bits) == s_lo);
        if x != lo && x != hi {
            if toward_hi {
                lo = x.clone();
            } else {
                hi = x.clone();
            }
        }
        let mut step = BigInt::one();
        while &hi - &lo > BigInt::one() {
            let probe = if toward_hi { &lo + &step } else { &hi - &step };
            if probe <= lo || probe >= hi {
                break;
            }
            if (f.sign_at_dyadic(&probe, bits) == s_lo) == toward_hi {
                if toward_hi {
                    lo = probe;
                } else {
                    hi = probe;
                }
                step <<= 1;
            } else {
                if toward_hi {
                    hi = probe;
                } else {
                    lo = probe;
                }
                break;
            }
        }
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1;
            if f.sign_at_dyadic(&mid, bits) == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    let tau = Decimal::from_dyadic(&lo, bits, digits);
    let bracket = (
        BigRational::new(lo, one.clone()),
        BigRational::new(hi, one),
    );
    Ok(DominantRoot { tau, bracket, bits })
}

/// `max | |z| - 1 |` over the roots of `f` other than `tau` and `1/tau`.
///
/// A root is treated as `tau` (resp. `1/tau`) when it lies within `1e-6` of
/// it; each of the two is removed at most once. Zero when nothing remains.
pub fn unit_circle_residual(f: &IntPoly, tau: f64) -> Result<f64> {
    let mut roots = aberth::aberth_roots(f)?;
    for target in [tau, 1.0 / tau] {
        let nearest = roots
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((i, dist)) = nearest {
            if dist < 1e-6 {
                roots.swap_remove(i);
            }
        }
    }
    Ok(roots
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max))
}

/// Everything `factor` and `grid` report about the dominant root.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootCertificate {
    pub tau: Decimal,
    #[serde(serialize_with = "bracket_str")]
    pub bracket: (BigRational, BigRational),
    /// spectral radius of the adjacency matrix
    #[serde(serialize_with = "float_str")]
    pub lambda: f64,
    /// `|sqrt(tau) + 1/sqrt(tau) - lambda|`
    #[serde(serialize_with = "float_str")]
    pub bridge_gap: f64,
    #[serde(serialize_with = "float_str")]
    pub unit_residual: f64,
    /// roots with `|z| > 1 + 1e-8`
    pub roots_outside: usize,
    pub classification: Classification,
}

pub(crate) fn float_str<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:e}"))
}

/// Root data for a Salem or quadratic Pisot factorization; `None` for
/// purely cyclotomic ones.
pub fn certify(fac: &CoxeterFactorization, digits: u32) -> Result<Option<RootCertificate>> {
    if !fac.classification.has_dominant_root() {
        return Ok(None);
    }
    let root = dominant_root(&fac.salem_factor, digits)?;
    let tau = root.to_f64();
    let lambda = spectral_radius(&fac.tree);
    let unit_residual = match fac.classification {
        Classification::Salem => unit_circle_residual(&fac.salem_factor, tau)?,
        _ => 0.0,
    };
    let roots_outside = aberth::count_outside_unit_circle(&fac.salem_factor, 1e-8)?;
    Ok(Some(RootCertificate {
        tau: root.tau,
        bracket: root.bracket,
        lambda,
        bridge_gap: (tau.sqrt() + 1.0 / tau.sqrt() - lambda).abs(),
        unit_residual,
        roots_outside,
        classification: fac.classification,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{mbonacci_poly, StarTree};
    use crate::factorize::factor_coxeter;

    const LEHMER_TAU: &str = "1.1762808182599175065440703384740350506934158065647";
    const GOLDEN: &str = "1.6180339887498948482045868343656381177203091798058";
    const TRIBONACCI: &str = "1.8392867552141611325518525646532866004241787460976";
    const TETRANACCI: &str = "1.9275619754829253042619058617366221686985542551634";

    fn lehmer() -> IntPoly {
        IntPoly::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    fn reference(s: &str, places: u32) -> Decimal {
        s.parse::<Decimal>().unwrap().truncate(places)
    }

    #[test]
    fn lehmer_number_to_forty_places() {
        let r = dominant_root(&lehmer(), 40).unwrap();
        assert_eq!(r.tau, reference(LEHMER_TAU, 40));
        assert!(r.bracket.0 < r.bracket.1);
        // f changes sign across the bracket
        let f = lehmer();
        let lo = f.eval_rational(&r.bracket.0);
        let hi = f.eval_rational(&r.bracket.1);
        assert!(lo.is_negative() != hi.is_negative());
    }

    #[test]
    fn reciprocal_partner_is_a_root() {
        let r = dominant_root(&lehmer(), 30).unwrap();
        let inv = r.midpoint().recip();
        let v = lehmer().eval_rational(&inv);
        assert!(v.abs() < BigRational::new(BigInt::one(), BigInt::from(10).pow(25)));
    }

    #[test]
    fn mbonacci_constants() {
        for (m, s) in [(2, GOLDEN), (3, TRIBONACCI), (4, TETRANACCI)] {
            let r = dominant_root(&mbonacci_poly(m).unwrap(), 45).unwrap();
            assert_eq!(r.tau, reference(s, 45), "m = {m}");
        }
    }

    #[test]
    fn quadratics() {
        // x^2 - 3x + 1: (3 + sqrt 5)/2
        let f = IntPoly::from_i64s(&[1, -3, 1]);
        let r = dominant_root(&f, 20).unwrap();
        assert_eq!(r.tau.to_string(), "2.61803398874989484820");
        assert_eq!(unit_circle_residual(&f, r.to_f64()).unwrap(), 0.0);
        // x^2 - 2 : sqrt 2, and a non-monic 2x^2 - 5x + 2 : root 2 exactly
        let r = dominant_root(&IntPoly::from_i64s(&[-2, 0, 1]), 25).unwrap();
        assert_eq!(r.tau.to_string(), "1.4142135623730950488016887");
        let r = dominant_root(&IntPoly::from_i64s(&[2, -5, 2]), 10).unwrap();
        assert_eq!(r.tau.to_string(), "2.0000000000");
        assert_eq!(r.bracket.0, r.bracket.1);
    }

    #[test]
    fn no_sign_change() {
        // x^2 + 1 is positive everywhere
        let err = dominant_root(&IntPoly::from_i64s(&[1, 0, 1]), 10).unwrap_err();
        assert!(matches!(err, Error::NoSignChange(_)));
        assert!(dominant_root(&IntPoly::constant(3), 10).is_err());
        // root exactly at 1 is below the accepted interval
        assert!(dominant_root(&IntPoly::from_i64s(&[-1, 1]), 10).is_err());
    }

    #[test]
    fn lehmer_unit_circle() {
        let res = unit_circle_residual(&lehmer(), 1.176_280_818_259_917_5).unwrap();
        assert!(res < 1e-9, "residual {res}");
        // without removing tau nothing is close to the circle
        assert!(unit_circle_residual(&lehmer(), 3.0).unwrap() > 0.1);
    }

    #[test]
    fn certificate_for_lehmer_tree() {
        let fac = factor_coxeter(&StarTree::triple(2, 3, 7).unwrap()).unwrap();
        let cert = certify(&fac, 30).unwrap().unwrap();
        assert_eq!(cert.tau, reference(LEHMER_TAU, 30));
        assert!(cert.bridge_gap < 1e-9);
        assert!(cert.unit_residual < 1e-9);
        assert_eq!(cert.roots_outside, 1);
        let cyc = factor_coxeter(&StarTree::triple(2, 3, 5).unwrap()).unwrap();
        assert!(certify(&cyc, 30).unwrap().is_none());
    }
}
