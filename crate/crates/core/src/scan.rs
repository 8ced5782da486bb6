//! Batch experiments over families and grids of three-arm trees.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::coxeter::{coxeter_polynomial, StarTree};
use crate::error::{Error, Result};
use crate::factorize::{
    cyclotomic_divides, factor_coxeter, has_cyclotomic_factor, multiplicity_bound,
    salem_degree_lower_bound, Classification,
};
use crate::roots::{certify, float_str};

/// `Phi_k | R_T(a0, a1, a1 + eta)`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub a0: u32,
    pub eta: u32,
    pub a1: u32,
    pub k: u32,
    pub a1_mod_k: u32,
    pub divides: bool,
}

impl ScanRecord {
    pub fn arms(&self) -> [u32; 3] {
        [self.a0, self.a1, self.a1 + self.eta]
    }
}

/// Records for every `a1` in range and `k <= k_max`, ordered by `(a1, k)`,
/// after checking that `divides` only depends on `(k, a1 mod k)`.
pub fn periodicity_scan(
    a0: u32,
    eta: u32,
    k_max: u32,
    a1_range: RangeInclusive<u32>,
) -> Result<Vec<ScanRecord>> {
    if a0 < 2 || eta < 1 || k_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "need a0 >= 2, eta >= 1, k_max >= 1 (got {a0}, {eta}, {k_max})"
        )));
    }
    if *a1_range.start() <= a0 {
        return Err(Error::Order(vec![a0, *a1_range.start(), *a1_range.start() + eta]));
    }
    let records: Vec<ScanRecord> = a1_range
        .into_par_iter()
        .map(|a1| -> Result<Vec<ScanRecord>> {
            let f = coxeter_polynomial(&StarTree::triple(a0, a1, a1 + eta)?)?;
            Ok((1..=k_max)
                .map(|k| ScanRecord {
                    a0,
                    eta,
                    a1,
                    k,
                    a1_mod_k: a1 % k,
                    divides: cyclotomic_divides(&f, u64::from(k)),
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut first: HashMap<(u32, u32), &ScanRecord> = HashMap::new();
    for rec in &records {
        let seen = *first.entry((rec.k, rec.a1_mod_k)).or_insert(rec);
        if seen.divides != rec.divides {
            return Err(Error::PeriodicityViolation {
                k: rec.k,
                first: seen.a1,
                first_divides: seen.divides,
                second: rec.a1,
                second_divides: rec.divides,
            });
        }
    }
    Ok(records)
}

/// Aggregate of [`grid_verify`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GridSummary {
    pub triples: usize,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    /// excluded triples (purely cyclotomic Coxeter polynomial)
    pub skipped: usize,
    /// triples where the degree lower bound is `<= 0`
    pub vacuous_degree_bounds: usize,
    pub max_observed_order: u64,
    pub max_observed_multiplicity: u32,
    /// `m` from the multiplicity bound for each `(a0, a2 - a1)` seen
    pub multiplicity_bounds: BTreeMap<String, String>,
    #[serde(serialize_with = "float_str")]
    pub max_bridge_gap: f64,
    #[serde(serialize_with = "float_str")]
    pub max_unit_residual: f64,
    pub failures: Vec<String>,
}

/// Tolerance on `|sqrt(tau) + 1/sqrt(tau) - lambda|`.
pub const BRIDGE_TOLERANCE: f64 = 1e-6;
/// Tolerance on the distance of the non-real conjugates from the circle.
pub const UNIT_TOLERANCE: f64 = 1e-9;
const ROOT_DIGITS: u32 = 30;

struct Outcome {
    excluded: bool,
    vacuous: bool,
    max_order: u64,
    max_mult: u32,
    bridge_gap: f64,
    unit_residual: f64,
    problems: Vec<String>,
}

fn check_triple(tree: &StarTree, m: &BigInt) -> Result<Outcome> {
    let fac = factor_coxeter(tree)?;
    let mut problems = Vec::new();
    if fac.reassemble() != fac.coxeter {
        problems.push("cyclotomic part times remainder differs from R_T".into());
    }
    if let Some(k) = has_cyclotomic_factor(&fac.salem_factor, fac.order_bound_used) {
        problems.push(format!("Phi_{k} still divides the remainder"));
    }
    if !matches!(
        fac.classification,
        Classification::Salem | Classification::QuadraticPisot
    ) {
        problems.push(format!("classified as {:?}", fac.classification));
    }
    if fac.max_observed_order > fac.order_bound_used {
        problems.push(format!(
            "order {} exceeds bound {}",
            fac.max_observed_order, fac.order_bound_used
        ));
    }
    if BigInt::from(fac.max_observed_multiplicity) > *m {
        problems.push(format!(
            "multiplicity {} exceeds m = {m}",
            fac.max_observed_multiplicity
        ));
    }
    let lb = salem_degree_lower_bound(tree, m)?;
    let vacuous = lb <= 0;
    if !vacuous && (fac.salem_degree() as i64) < lb {
        problems.push(format!("deg S = {} below bound {lb}", fac.salem_degree()));
    }
    let (mut bridge_gap, mut unit_residual) = (0.0, 0.0);
    if let Some(cert) = certify(&fac, ROOT_DIGITS)? {
        bridge_gap = cert.bridge_gap;
        unit_residual = cert.unit_residual;
        if bridge_gap.is_nan() || bridge_gap > BRIDGE_TOLERANCE {
            problems.push(format!("lambda-tau gap {bridge_gap:e}"));
        }
        if unit_residual.is_nan() || unit_residual >= UNIT_TOLERANCE {
            problems.push(format!("unit-circle residual {unit_residual:e}"));
        }
        if cert.roots_outside != 1 {
            problems.push(format!("{} roots outside the circle", cert.roots_outside));
        }
    }
    Ok(Outcome {
        excluded: false,
        vacuous,
        max_order: fac.max_observed_order,
        max_mult: fac.max_observed_multiplicity,
        bridge_gap,
        unit_residual,
        problems,
    })
}

type TripleOutcome = std::result::Result<Outcome, String>;

/// Runs every check on each strictly ordered triple in the ranges.
/// Failures are collected in the summary, never returned as errors.
pub fn grid_verify(
    a0_range: RangeInclusive<u32>,
    a1_range: RangeInclusive<u32>,
    a2_range: RangeInclusive<u32>,
) -> GridSummary {
    let mut triples = Vec::new();
    for a0 in a0_range.filter(|&a| a >= 2) {
        for a1 in a1_range.clone().filter(|&a| a > a0) {
            for a2 in a2_range.clone().filter(|&a| a > a1) {
                triples.push((a0, a1, a2));
            }
        }
    }
    let mut pairs: Vec<(u32, u32)> = triples.iter().map(|&(a0, a1, a2)| (a0, a2 - a1)).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let bounds: BTreeMap<(u32, u32), std::result::Result<BigInt, String>> = pairs
        .par_iter()
        .map(|&(a0, d)| {
            let m = multiplicity_bound(a0, d).map(|t| t.m).map_err(|e| e.to_string());
            ((a0, d), m)
        })
        .collect();

    let outcomes: Vec<((u32, u32, u32), TripleOutcome)> = triples
        .par_iter()
        .map(|&(a0, a1, a2)| {
            let tree = StarTree::triple(a0, a1, a2).expect("valid arms");
            let out = if tree.is_excluded() {
                Ok(Outcome {
                    excluded: true,
                    vacuous: false,
                    max_order: 0,
                    max_mult: 0,
                    bridge_gap: 0.0,
                    unit_residual: 0.0,
                    problems: Vec::new(),
                })
            } else {
                match &bounds[&(a0, a2 - a1)] {
                    Ok(m) => check_triple(&tree, m).map_err(|e| e.to_string()),
                    Err(e) => Err(format!("multiplicity bound: {e}")),
                }
            };
            ((a0, a1, a2), out)
        })
        .collect();

    let mut s = GridSummary {
        triples: triples.len(),
        multiplicity_bounds: bounds
            .iter()
            .filter_map(|(&(a0, d), m)| m.as_ref().ok().map(|m| (format!("{a0},{d}"), m.to_string())))
            .collect(),
        ..GridSummary::default()
    };
    for ((a0, a1, a2), out) in outcomes {
        let name = format!("T({a0},{a1},{a2})");
        match out {
            Err(e) => {
                s.checked += 1;
                s.failed += 1;
                s.failures.push(format!("{name}: {e}"));
            }
            Ok(o) if o.excluded => s.skipped += 1,
            Ok(o) => {
                s.checked += 1;
                s.vacuous_degree_bounds += usize::from(o.vacuous);
                s.max_observed_order = s.max_observed_order.max(o.max_order);
                s.max_observed_multiplicity = s.max_observed_multiplicity.max(o.max_mult);
                s.max_bridge_gap = s.max_bridge_gap.max(o.bridge_gap);
                s.max_unit_residual = s.max_unit_residual.max(o.unit_residual);
                if o.problems.is_empty() {
                    s.passed += 1;
                } else {
                    s.failed += 1;
                    s.failures
                        .extend(o.problems.into_iter().map(|p| format!("{name}: {p}")));
                }
            }
        }
    }
    s
}
