//! Splitting `R_T = C * S` into its cyclotomic part `C` and the remaining
//! Salem (or quadratic Pisot) factor `S`, plus the bounds that constrain
//! the split.

mod mann;
mod multiplicity;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::coxeter::{coxeter_polynomial, StarTree};
use crate::cyclotomic::{euler_phi, phi_sum, CyclotomicTable};
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::roots::aberth::aberth_roots;

pub use mann::{mann_modulus, verify_mann, MannWitness};
pub use multiplicity::{
    circle_min_lower_bound, multiplicity_bound, multiplicity_bound_with, CertifyConfig,
    MultiplicityBoundTrace,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    Salem,
    QuadraticPisot,
    CyclotomicOnly,
    /// Arms not strictly increasing and something left after the sieve:
    /// the factorization is still computed but no claim about the remainder
    /// is made.
    OutsideHypotheses,
}

impl Classification {
    pub fn has_dominant_root(self) -> bool {
        matches!(self, Classification::Salem | Classification::QuadraticPisot)
    }
}

/// Result of sieving cyclotomic factors out of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicSplit {
    /// order `k` -> multiplicity of `Phi_k`
    pub factors: BTreeMap<u64, u32>,
    pub remainder: IntPoly,
}

impl CyclotomicSplit {
    pub fn cyclotomic_part(&self) -> IntPoly {
        let table = CyclotomicTable::global();
        self.factors
            .iter()
            .map(|(&k, &m)| table.get(k).pow(m))
            .product()
    }

    pub fn reassemble(&self) -> IntPoly {
        &self.cyclotomic_part() * &self.remainder
    }
}

/// Largest `k` with `phi(k) <= degree`: no cyclotomic factor of higher order
/// can divide a polynomial of that degree.
pub fn order_cap_for_degree(degree: usize) -> u64 {
    // phi(k) >= sqrt(k / 2), so every candidate is at most 2 d^2.
    let limit = 2 * (degree as u64).pow(2);
    (1..=limit.max(1))
        .rev()
        .find(|&k| euler_phi(k) as usize <= degree)
        .unwrap_or(1)
}

/// `false` only when `|f(e^{2 pi i / k})|` is certainly nonzero.
///
/// The tolerance is `1e-6 * sum (i+1)|c_i|`, several orders above the
/// rounding error of Horner's rule plus the error in the sampled root, so a
/// genuine root is never rejected.
fn may_vanish_at_primitive_root(f: &IntPoly, k: u64) -> bool {
    let z = Complex64::from_polar(1.0, 2.0 * PI / k as f64);
    let scale: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (i + 1) as f64 * c.abs().to_f64().unwrap_or(f64::INFINITY))
        .sum();
    f.eval_complex(z).norm() <= 1e-6 * scale
}

/// Exact `Phi_k | f`, with the float screen in front.
pub fn cyclotomic_divides(f: &IntPoly, k: u64) -> bool {
    match f.degree() {
        None => true,
        Some(deg) => {
            euler_phi(k) as usize <= deg
                && may_vanish_at_primitive_root(f, k)
                && CyclotomicTable::global().get(k).divides(f)
        }
    }
}

/// Divides out `Phi_k` for `k = 1..=max_order` in ascending order, as many
/// times as it divides. Orders with `phi(k)` above the current degree are
/// skipped, and a floating-point evaluation at `e^{2 pi i/k}` rules out most
/// of the others before any exact division is attempted.
pub fn extract_cyclotomic(f: &IntPoly, max_order: u64) -> CyclotomicSplit {
    assert!(!f.is_zero(), "cannot sieve the zero polynomial");
    let table = CyclotomicTable::global();
    let mut remainder = f.clone();
    let mut factors = BTreeMap::new();
    for k in 1..=max_order {
        let deg = remainder.degree().unwrap_or(0);
        if deg == 0 || k > 2 * (deg as u64).pow(2) {
            break;
        }
        if euler_phi(k) as usize > deg || !may_vanish_at_primitive_root(&remainder, k) {
            continue;
        }
        let phi_k = table.get(k);
        let mut mult = 0u32;
        while let Some((q, r)) = remainder.try_div_rem(&phi_k) {
            if !r.is_zero() {
                break;
            }
            remainder = q;
            mult += 1;
        }
        if mult > 0 {
            factors.insert(k, mult);
        }
    }
    CyclotomicSplit { factors, remainder }
}

/// Whether some `Phi_k` with `k <= max_order` still divides `f`, checked by
/// exact division for every `k` whose degree allows it (no float shortcut).
pub fn has_cyclotomic_factor(f: &IntPoly, max_order: u64) -> Option<u64> {
    let deg = f.degree()?;
    let table = CyclotomicTable::global();
    let top = max_order.min(2 * (deg as u64).pow(2));
    (1..=top).find(|&k| euler_phi(k) as usize <= deg && table.get(k).divides(f))
}

/// `420 (a2 - a1 + a0 - 1)`, the bound on the order of any root of unity
/// that is a root of `P` for a strictly ordered three-arm tree.
pub fn order_bound(a0: u32, a1: u32, a2: u32) -> Result<u64> {
    if !(a0 > 1 && a1 > a0 && a2 > a1) {
        return Err(Error::Order(vec![a0, a1, a2]));
    }
    Ok(420 * u64::from(a2 - a1 + a0 - 1))
}

fn tree_order_bound(tree: &StarTree) -> Result<u64> {
    match tree.arms() {
        &[a0, a1, a2] => order_bound(a0, a1, a2),
        arms => Err(Error::Arity {
            expected: 3,
            got: arms.len(),
        }),
    }
}

/// Number of real roots in `(1, inf)`. Exact via Descartes' rule on
/// `f(x + 1)` when that yields 0 or 1 sign changes, numeric otherwise.
pub fn real_roots_above_one(f: &IntPoly) -> Result<usize> {
    let variations = f.taylor_shift_one().sign_variations();
    if variations <= 1 {
        return Ok(variations);
    }
    let roots = aberth_roots(f)?;
    Ok(roots
        .iter()
        .filter(|z| z.im.abs() <= 1e-7 * z.norm().max(1.0) && z.re > 1.0 + 1e-9)
        .count())
}

fn classify_remainder(rem: &IntPoly) -> Result<Classification> {
    let fail = |reason: &str| Error::Classification {
        remainder: rem.clone(),
        reason: reason.to_string(),
    };
    match rem.degree() {
        None => Err(fail("zero remainder")),
        Some(0) => Ok(Classification::CyclotomicOnly),
        Some(2) => match real_roots_above_one(rem)? {
            1 => Ok(Classification::QuadraticPisot),
            n => Err(fail(&format!("quadratic with {n} roots above 1"))),
        },
        Some(d) => {
            if d % 2 == 1 || d < 4 {
                return Err(fail("odd or too small degree"));
            }
            if !rem.is_reciprocal() {
                return Err(fail("not reciprocal"));
            }
            match real_roots_above_one(rem)? {
                1 => Ok(Classification::Salem),
                n => Err(fail(&format!("{n} real roots above 1"))),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterFactorization {
    pub tree: StarTree,
    pub coxeter: IntPoly,
    /// order `k` -> multiplicity of `Phi_k` in `C`
    pub cyclotomic_factors: BTreeMap<u64, u32>,
    pub salem_factor: IntPoly,
    pub classification: Classification,
    pub order_bound_used: u64,
    /// The sieve ran up to the proven three-arm order bound rather than a
    /// caller cap or the degree cap.
    pub order_bound_proved: bool,
    pub max_observed_order: u64,
    pub max_observed_multiplicity: u32,
    pub unramified: bool,
}

impl CoxeterFactorization {
    pub fn salem_degree(&self) -> usize {
        self.salem_factor.degree().unwrap_or(0)
    }

    pub fn split(&self) -> CyclotomicSplit {
        CyclotomicSplit {
            factors: self.cyclotomic_factors.clone(),
            remainder: self.salem_factor.clone(),
        }
    }

    pub fn reassemble(&self) -> IntPoly {
        self.split().reassemble()
    }
}

/// Factors `R_T` with the default sieve range: the proven order bound for
/// strictly ordered three-arm trees, the degree cap otherwise.
pub fn factor_coxeter(tree: &StarTree) -> Result<CoxeterFactorization> {
    factor_coxeter_with(tree, None)
}

/// As [`factor_coxeter`], sieving up to `max_order` when given.
pub fn factor_coxeter_with(tree: &StarTree, max_order: Option<u64>) -> Result<CoxeterFactorization> {
    let coxeter = coxeter_polynomial(tree)?;
    let proved = tree.r() == 2 && tree.is_strictly_ordered();
    let bound = match (max_order, proved) {
        (Some(cap), _) => cap,
        (None, true) => tree_order_bound(tree)?,
        (None, false) => order_cap_for_degree(coxeter.degree().unwrap_or(0)),
    };
    let split = extract_cyclotomic(&coxeter, bound);
    let classification = if tree.is_strictly_ordered() || split.remainder.degree() == Some(0) {
        classify_remainder(&split.remainder)?
    } else {
        Classification::OutsideHypotheses
    };
    let unramified = split.remainder.degree().unwrap_or(0) > 0 && {
        let at = |v: i64| split.remainder.eval_int(&BigInt::from(v)).abs();
        at(1).is_one() && at(-1).is_one()
    };
    Ok(CoxeterFactorization {
        tree: tree.clone(),
        max_observed_order: split.factors.keys().copied().max().unwrap_or(0),
        max_observed_multiplicity: split.factors.values().copied().max().unwrap_or(0),
        cyclotomic_factors: split.factors,
        salem_factor: split.remainder,
        coxeter,
        classification,
        order_bound_used: bound,
        order_bound_proved: proved && max_order.is_none(),
        unramified,
    })
}

/// `deg R_T - m * sum_{k <= 420(a2-a1+a0-1)} phi(k)`; negative values mean
/// the bound says nothing.
pub fn salem_degree_lower_bound(tree: &StarTree, m: &BigInt) -> Result<i64> {
    if tree.r() != 2 {
        return Err(Error::Arity {
            expected: 3,
            got: tree.arms().len(),
        });
    }
    let bound = tree_order_bound(tree)?;
    Ok(degree_lower_bound(tree.vertex_count() as u64, m, phi_sum(bound)))
}

/// `degree - m * phi_total`, saturated to the `i64` range.
pub fn degree_lower_bound(degree: u64, m: &BigInt, phi_total: u64) -> i64 {
    let v = BigInt::from(degree) - m * phi_total;
    v.to_i64()
        .unwrap_or(if v.is_negative() { i64::MIN } else { i64::MAX })
}

/// Every cyclotomic order found in `R_T` respects the proven order bound.
pub fn verify_order_bound(tree: &StarTree) -> Result<bool> {
    if !tree.in_three_arm_setting() {
        return Err(Error::InvalidArgument(format!(
            "{tree} is not a strictly ordered, non-excluded three-arm tree"
        )));
    }
    let bound = tree_order_bound(tree)?;
    // Sieve past the bound so a violation would actually be seen.
    let cap = bound.max(order_cap_for_degree(tree.vertex_count()));
    let f = factor_coxeter_with(tree, Some(cap))?;
    Ok(f.max_observed_order <= bound)
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclotomicEntry {
    pub order: u64,
    pub multiplicity: u32,
}

/// The machine-readable factorization record.
#[derive(Clone, Debug, Serialize)]
pub struct FactorizationRecord {
    pub arms: Vec<u32>,
    pub classification: Classification,
    pub cyclotomic: Vec<CyclotomicEntry>,
    pub salem_coeffs: IntPoly,
    pub salem_degree: usize,
    pub order_bound: u64,
    pub degree_lower_bound: Option<i64>,
    pub unramified: bool,
}

impl FactorizationRecord {
    pub fn new(f: &CoxeterFactorization, degree_lower_bound: Option<i64>) -> Self {
        FactorizationRecord {
            arms: f.tree.arms().to_vec(),
            classification: f.classification,
            cyclotomic: f
                .cyclotomic_factors
                .iter()
                .map(|(&order, &multiplicity)| CyclotomicEntry {
                    order,
                    multiplicity,
                })
                .collect(),
            salem_coeffs: f.salem_factor.clone(),
            salem_degree: f.salem_degree(),
            order_bound: f.order_bound_used,
            degree_lower_bound,
            unramified: f.unramified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cyclotomic_poly;

    fn tree(arms: &[u32]) -> StarTree {
        StarTree::new(arms.to_vec()).unwrap()
    }

    fn lehmer() -> IntPoly {
        IntPoly::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    #[test]
    fn order_bound_values() {
        assert_eq!(order_bound(2, 3, 7).unwrap(), 2100);
        assert_eq!(order_bound(3, 5, 8).unwrap(), 2100);
        assert_eq!(order_bound(2, 5, 6).unwrap(), 840);
        assert!(matches!(order_bound(3, 3, 5), Err(Error::Order(_))));
        assert!(order_bound(1, 3, 5).is_err());
    }

    #[test]
    fn sieve_small() {
        let s = extract_cyclotomic(&IntPoly::from_i64s(&[-1, 0, 1]), 2);
        assert_eq!(s.factors, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(s.remainder, IntPoly::one());
    }

    #[test]
    fn sieve_lehmer_finds_nothing() {
        let s = extract_cyclotomic(&lehmer(), 2100);
        assert!(s.factors.is_empty());
        assert_eq!(s.remainder, lehmer());
        assert_eq!(has_cyclotomic_factor(&lehmer(), 2100), None);
    }

    #[test]
    fn sieve_234_is_fully_cyclotomic() {
        let rt = coxeter_polynomial(&tree(&[2, 3, 4])).unwrap();
        let s = extract_cyclotomic(&rt, 840);
        assert_eq!(s.remainder, IntPoly::one());
        assert_eq!(s.factors, BTreeMap::from([(2, 1), (18, 1)]));
        assert_eq!(s.reassemble(), rt);
    }

    #[test]
    fn sieve_counts_multiplicity() {
        let f = &(&cyclotomic_poly(1).pow(3) * &cyclotomic_poly(12).pow(2)) * &lehmer();
        let s = extract_cyclotomic(&f, 50);
        assert_eq!(s.factors, BTreeMap::from([(1, 3), (12, 2)]));
        assert_eq!(s.remainder, lehmer());
        // a cap below 12 leaves Phi_12 in the remainder
        let s = extract_cyclotomic(&f, 11);
        assert_eq!(s.factors, BTreeMap::from([(1, 3)]));
        assert_eq!(has_cyclotomic_factor(&s.remainder, 50), Some(12));
    }

    #[test]
    fn degree_cap() {
        assert_eq!(order_cap_for_degree(1), 2);
        assert_eq!(order_cap_for_degree(2), 6);
        assert_eq!(order_cap_for_degree(4), 12);
        for d in 1..40usize {
            let cap = order_cap_for_degree(d);
            assert!(euler_phi(cap) as usize <= d);
            assert!((cap + 1..=2 * (d as u64).pow(2) + 10).all(|k| euler_phi(k) as usize > d));
        }
    }

    #[test]
    fn factor_lehmer_tree() {
        let f = factor_coxeter(&tree(&[2, 3, 7])).unwrap();
        assert_eq!(f.classification, Classification::Salem);
        assert_eq!(f.salem_factor, lehmer());
        assert_eq!(f.salem_degree(), 10);
        assert!(f.cyclotomic_factors.is_empty());
        assert_eq!(f.order_bound_used, 2100);
        assert!(f.order_bound_proved);
        // Lehmer's polynomial: L(1) = -1, L(-1) = 1
        assert!(f.unramified);
    }

    #[test]
    fn factor_excluded_trees() {
        for c in [4, 5, 6] {
            let f = factor_coxeter(&tree(&[2, 3, c])).unwrap();
            assert_eq!(f.classification, Classification::CyclotomicOnly, "c = {c}");
            assert_eq!(f.salem_factor, IntPoly::one());
            assert!(!f.unramified);
            assert_eq!(f.reassemble(), f.coxeter);
        }
        // E8: R_T(2,3,5) is Phi_30
        let f = factor_coxeter(&tree(&[2, 3, 5])).unwrap();
        assert_eq!(f.cyclotomic_factors, BTreeMap::from([(30, 1)]));
        let f = factor_coxeter(&tree(&[2, 3, 6])).unwrap();
        assert_eq!(
            f.cyclotomic_factors,
            BTreeMap::from([(1, 2), (2, 1), (3, 1), (5, 1)])
        );
        assert_eq!(f.max_observed_multiplicity, 2);
    }

    #[test]
    fn factor_245() {
        let f = factor_coxeter(&tree(&[2, 4, 5])).unwrap();
        assert_eq!(f.classification, Classification::Salem);
        assert_eq!(f.cyclotomic_factors, BTreeMap::from([(2, 1)]));
        assert_eq!(f.salem_factor, IntPoly::from_i64s(&[1, 0, 0, -1, -1, -1, 0, 0, 1]));
        assert_eq!(f.max_observed_order, 2);
        assert!(verify_order_bound(&tree(&[2, 4, 5])).unwrap());
        assert!(verify_order_bound(&tree(&[2, 3, 7])).unwrap());
    }

    #[test]
    fn unordered_trees_are_outside_hypotheses() {
        let f = factor_coxeter(&tree(&[3, 3, 5])).unwrap();
        assert_eq!(f.classification, Classification::OutsideHypotheses);
        assert_eq!(f.reassemble(), f.coxeter);
        assert!(!f.order_bound_proved);
        assert!(verify_order_bound(&tree(&[3, 3, 5])).is_err());
    }

    #[test]
    fn four_arm_tree_uses_degree_cap() {
        let t = tree(&[2, 4, 10, 11]);
        let f = factor_coxeter(&t).unwrap();
        assert!(!f.order_bound_proved);
        assert_eq!(f.order_bound_used, order_cap_for_degree(t.vertex_count()));
        assert_eq!(f.classification, Classification::Salem);
        assert_eq!(f.reassemble(), f.coxeter);
        assert_eq!(has_cyclotomic_factor(&f.salem_factor, f.order_bound_used), None);
    }

    #[test]
    fn path_trees_are_cyclotomic() {
        for (a, b) in [(2, 2), (2, 3), (3, 7), (5, 5)] {
            let f = factor_coxeter(&tree(&[a, b])).unwrap();
            assert_eq!(f.classification, Classification::CyclotomicOnly);
        }
    }

    #[test]
    fn degree_lower_bound_arithmetic() {
        assert!(salem_degree_lower_bound(&tree(&[2, 3, 7]), &BigInt::one()).unwrap() < 0);
        assert_eq!(
            salem_degree_lower_bound(&tree(&[2, 3, 7]), &BigInt::one()).unwrap(),
            10 - 1_340_822
        );
        assert_eq!(degree_lower_bound(phi_sum(50) + 5, &BigInt::one(), phi_sum(50)), 5);
        assert_eq!(degree_lower_bound(0, &BigInt::from(u64::MAX), u64::MAX), i64::MIN);
        assert!(salem_degree_lower_bound(&tree(&[2, 4, 5, 7]), &BigInt::one()).is_err());
    }

    #[test]
    fn salem_shape_on_small_grid() {
        for a0 in 2..7 {
            for a1 in a0 + 1..10 {
                for a2 in a1 + 1..13 {
                    let t = tree(&[a0, a1, a2]);
                    let f = factor_coxeter(&t).unwrap();
                    assert_eq!(f.reassemble(), f.coxeter, "{t}");
                    if t.is_excluded() {
                        assert_eq!(f.classification, Classification::CyclotomicOnly);
                        continue;
                    }
                    assert!(f.classification.has_dominant_root(), "{t}");
                    if f.classification == Classification::Salem {
                        let s = &f.salem_factor;
                        assert!(s.is_reciprocal());
                        assert!(s.coeff(0).is_one());
                        let at = |v: i64| s.eval_int(&BigInt::from(v)).abs();
                        assert!(at(1) * at(-1) >= BigInt::one());
                    }
                }
            }
        }
    }

    #[test]
    fn record_shape() {
        let f = factor_coxeter(&tree(&[2, 4, 5])).unwrap();
        let rec = FactorizationRecord::new(&f, Some(-5));
        assert_eq!(rec.arms, vec![2, 4, 5]);
        assert_eq!(rec.cyclotomic.len(), 1);
        assert_eq!(rec.salem_degree, 8);
        assert_eq!(rec.order_bound, 840);
    }
}
