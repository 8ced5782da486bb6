//! All complex roots of an integer polynomial in `f64`, by Aberth-Ehrlich
//! simultaneous iteration followed by a Newton polish.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

const MAX_ITERATIONS: usize = 2000;
const STEP_TOLERANCE: f64 = 1e-15;
const RESIDUAL_TOLERANCE: f64 = 1e-10;

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// `|f(z)| / sum |c_i| |z|^i`: backward error of a computed root.
pub fn relative_residual(f: &IntPoly, z: Complex64) -> f64 {
    let c = f.to_f64_coeffs();
    let (p, _) = horner(&c, z);
    let r = z.norm();
    let scale: f64 = c.iter().rev().fold(0.0, |acc, a| acc * r + a.abs());
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Roots of `f` with multiplicity; the empty vector for constants.
///
/// Fails with [`Error::NonConvergence`] if some root does not reach a
/// relative residual below `1e-10` within the iteration cap.
pub fn aberth_roots(f: &IntPoly) -> Result<Vec<Complex64>> {
    let d = match f.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };
    let raw = f.to_f64_coeffs();
    let lead = raw[d];
    let c: Vec<f64> = raw.iter().map(|a| a / lead).collect();

    // Zero roots are exact; strip them so the start radius stays sensible.
    let zeros = c.iter().take_while(|a| **a == 0.0).count();
    let c = &c[zeros..];
    let n = d - zeros;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if n == 0 {
        return Ok(roots);
    }

    let radius = c[0].abs().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();

    let mut last = f64::INFINITY;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        last = max_step;
        if max_step <= STEP_TOLERANCE {
            converged = true;
            break;
        }
    }

    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *zi);
            let step = p / dp;
            if step.is_finite() {
                *zi -= step;
            }
        }
    }

    let worst = z
        .iter()
        .map(|&zi| relative_residual(f, zi))
        .fold(0.0, f64::max);
    if worst.is_nan() || worst >= RESIDUAL_TOLERANCE {
        return Err(Error::NonConvergence {
            iterations: MAX_ITERATIONS,
            last_correction: if converged { worst } else { last },
        });
    }
    roots.extend(z);
    Ok(roots)
}

/// Number of roots with `|z| > 1 + tol`.
pub fn count_outside_unit_circle(f: &IntPoly, tol: f64) -> Result<usize> {
    Ok(aberth_roots(f)?.iter().filter(|z| z.norm() > 1.0 + tol).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn integer_roots() {
        // (x - 1)(x - 2)(x + 3)
        let f = IntPoly::from_i64s(&[6, -7, 0, 1]);
        let r = sorted_re(aberth_roots(&f).unwrap());
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn roots_of_unity() {
        let f = IntPoly::x_pow_minus_one(12);
        let r = aberth_roots(&f).unwrap();
        assert_eq!(r.len(), 12);
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        assert!(r.iter().all(|z| (z.powu(12) - 1.0).norm() < 1e-10));
    }

    #[test]
    fn zero_roots_and_constants() {
        assert!(aberth_roots(&IntPoly::constant(5)).unwrap().is_empty());
        let f = IntPoly::from_i64s(&[0, 0, -2, 1]);
        let r = sorted_re(aberth_roots(&f).unwrap());
        assert_eq!(r[0], 0.0);
        assert_eq!(r[1], 0.0);
        assert!((r[2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lehmer_has_one_root_outside() {
        let f = IntPoly::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert_eq!(count_outside_unit_circle(&f, 1e-8).unwrap(), 1);
        let r = aberth_roots(&f).unwrap();
        let tau = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((tau - 1.176_280_818_259_917_5).abs() < 1e-12);
    }

    #[test]
    fn cyclotomic_roots() {
        for n in [105u64, 210, 231, 385] {
            let f = crate::cyclotomic::cyclotomic_poly(n);
            let r = aberth_roots(&f).unwrap();
            assert_eq!(r.len(), f.degree().unwrap());
            assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-9), "n = {n}");
        }
    }
}
