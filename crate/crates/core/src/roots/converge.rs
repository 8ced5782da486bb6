use rayon::prelude::*;
use serde::Serialize;

use super::{dominant_root, Decimal};
use crate::coxeter::{limit_polynomial, mbonacci_poly, StarTree};
use crate::error::{Error, Result};
use crate::factorize::factor_coxeter;

/// One tree of a convergence sweep. Excluded trees keep their row with
/// `tau` and `gap` empty and a note.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub arms: Vec<u32>,
    pub tau: Option<Decimal>,
    pub limit: Decimal,
    /// `tau - limit`, signed
    pub gap: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn sweep(trees: Vec<StarTree>, limit: Decimal, digits: u32) -> Result<Vec<ConvergenceRecord>> {
    trees
        .into_par_iter()
        .map(|tree| {
            let arms = tree.arms().to_vec();
            if tree.is_excluded() {
                return Ok(ConvergenceRecord {
                    arms,
                    tau: None,
                    limit: limit.clone(),
                    gap: None,
                    note: Some("excluded: Coxeter polynomial is cyclotomic".into()),
                });
            }
            let fac = factor_coxeter(&tree)?;
            if !fac.classification.has_dominant_root() {
                return Err(Error::InternalInconsistency(format!(
                    "{tree} has no dominant root to follow"
                )));
            }
            let tau = dominant_root(&fac.salem_factor, digits)?.tau;
            let gap = tau.sub(&limit);
            Ok(ConvergenceRecord {
                arms,
                tau: Some(tau),
                limit: limit.clone(),
                gap: Some(gap),
                note: None,
            })
        })
        .collect()
}

/// Salem numbers of `T(a0, a1, a1 + eta)` against the `a0`-bonacci constant.
pub fn converge_mbonacci(
    a0: u32,
    eta: u32,
    a1_values: &[u32],
    digits: u32,
) -> Result<Vec<ConvergenceRecord>> {
    if a0 < 2 || eta < 1 {
        return Err(Error::InvalidArgument(format!(
            "need a0 >= 2 and eta >= 1, got a0 = {a0}, eta = {eta}"
        )));
    }
    let limit = dominant_root(&mbonacci_poly(a0)?, digits)?.tau;
    let trees = a1_values
        .iter()
        .map(|&a1| {
            if a1 <= a0 {
                return Err(Error::Order(vec![a0, a1, a1 + eta]));
            }
            StarTree::triple(a0, a1, a1 + eta)
        })
        .collect::<Result<Vec<_>>>()?;
    sweep(trees, limit, digits)
}

/// Salem numbers of `T(prefix, tail)` for each tail in `schedule` against
/// the dominant root of the limit polynomial for `prefix` and `r`.
pub fn converge_general(
    prefix: &[u32],
    r: usize,
    schedule: &[Vec<u32>],
    digits: u32,
) -> Result<Vec<ConvergenceRecord>> {
    let limit_poly = limit_polynomial(prefix, r)?;
    let limit = dominant_root(&limit_poly, digits)?.tau;
    let tail_len = r + 1 - prefix.len();
    let trees = schedule
        .iter()
        .map(|tail| {
            if tail.len() != tail_len {
                return Err(Error::Arity {
                    expected: tail_len,
                    got: tail.len(),
                });
            }
            let arms: Vec<u32> = prefix.iter().chain(tail).copied().collect();
            let tree = StarTree::new(arms.clone())?;
            if !tree.is_strictly_ordered() {
                return Err(Error::Order(arms));
            }
            Ok(tree)
        })
        .collect::<Result<Vec<_>>>()?;
    sweep(trees, limit, digits)
}

/// `|gap|` strictly decreasing along the records that have one.
pub fn gaps_strictly_decrease(records: &[ConvergenceRecord]) -> bool {
    let gaps: Vec<Decimal> = records
        .iter()
        .filter_map(|r| r.gap.as_ref().map(Decimal::abs))
        .collect();
    gaps.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap(r: &ConvergenceRecord) -> f64 {
        r.gap.as_ref().unwrap().to_f64()
    }

    #[test]
    fn golden_ratio_family() {
        let recs = converge_mbonacci(2, 1, &[10, 20, 30, 40], 30).unwrap();
        assert!(gaps_strictly_decrease(&recs));
        // oracle: -1.007e-2, -7.747e-5, -6.293e-7, -5.117e-9
        let expect = [-1.007e-2, -7.747e-5, -6.293e-7, -5.117e-9];
        for (r, e) in recs.iter().zip(expect) {
            assert!((gap(r) / e - 1.0).abs() < 1e-3, "{:?}: {} vs {e}", r.arms, gap(r));
        }
        assert_eq!(recs[0].arms, vec![2, 10, 11]);
    }

    #[test]
    fn excluded_trees_are_annotated() {
        let recs = converge_mbonacci(2, 1, &[3, 4], 20).unwrap();
        assert!(recs[0].tau.is_none() && recs[0].note.is_some());
        assert!(recs[1].tau.is_some());
        assert!(converge_mbonacci(3, 1, &[2], 20).is_err());
    }

    #[test]
    fn four_arm_family() {
        let sched = vec![vec![10, 11], vec![20, 21], vec![40, 41]];
        let recs = converge_general(&[2, 4], 3, &sched, 32).unwrap();
        assert!(gaps_strictly_decrease(&recs));
        assert_eq!(
            recs[0].limit.to_string()[..25].to_string(),
            "2.69679718910396033934523"
        );
        let expect = [-1.2755e-4, -6.266e-9, -1.5137e-17];
        for (r, e) in recs.iter().zip(expect) {
            assert!((gap(r) / e - 1.0).abs() < 1e-3, "{:?}: {} vs {e}", r.arms, gap(r));
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(converge_general(&[2, 4], 3, &[vec![10]], 20).is_err());
        assert!(converge_general(&[2, 4], 3, &[vec![11, 10]], 20).is_err());
        assert!(converge_general(&[2, 4], 3, &[vec![3, 10]], 20).is_err());
    }
}
