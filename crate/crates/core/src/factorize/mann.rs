//! Brute-force check of the three-term vanishing sum lemma: if
//! `a z^p + b z^q + c = 0` for a root of unity `z` (with `a, b, c` nonzero
//! and `(p, q) != (0, 0)`) then the order of `z` divides `6 gcd(p, q)`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::cyclotomic::CyclotomicTable;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// `z = exp(2 pi i exponent / order)`, a primitive `order`-th root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MannWitness {
    pub order: u64,
    pub exponent: u64,
}

/// `6 gcd(p, q)`
pub fn mann_modulus(p: i64, q: i64) -> u64 {
    6 * p.unsigned_abs().gcd(&q.unsigned_abs())
}

/// `a x^{p mod n} + b x^{q mod n} + c`: vanishes at a primitive `n`-th root
/// of unity iff the original sum does.
fn reduced_sum(a: i64, b: i64, c: i64, p: i64, q: i64, n: u64) -> IntPoly {
    let n_i = n as i64;
    let (pe, qe) = (p.rem_euclid(n_i) as usize, q.rem_euclid(n_i) as usize);
    let mut coeffs = vec![BigInt::from(0); pe.max(qe) + 1];
    coeffs[pe] += a;
    coeffs[qe] += b;
    coeffs[0] += c;
    IntPoly::from_coeffs(coeffs)
}

/// All roots of unity of order `<= search_order` solving
/// `a z^p + b z^q + c = 0`.
///
/// Each primitive root is screened in `f64` (`|value| < 1e-9`); an order
/// with hits is then confirmed exactly by testing `Phi_n | a x^{p mod n} +
/// b x^{q mod n} + c`, and only confirmed orders are returned.
pub fn verify_mann(
    a: i64,
    b: i64,
    c: i64,
    p: i64,
    q: i64,
    search_order: u64,
) -> Result<Vec<MannWitness>> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::InvalidArgument(
            "coefficients a, b, c must be nonzero".into(),
        ));
    }
    if p == 0 && q == 0 {
        return Err(Error::InvalidArgument("(p, q) must not be (0, 0)".into()));
    }
    let table = CyclotomicTable::global();
    let mut witnesses = Vec::new();
    for n in 1..=search_order {
        let n_i = n as i64;
        let hits: Vec<u64> = (0..n)
            .filter(|j| j.gcd(&n) == 1)
            .filter(|&j| {
                let angle = |e: i64| {
                    let k = (j as i64 * e.rem_euclid(n_i)).rem_euclid(n_i);
                    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
                };
                let v = angle(p) * a as f64 + angle(q) * b as f64 + c as f64;
                v.norm() < 1e-9
            })
            .collect();
        if hits.is_empty() {
            continue;
        }
        if table.get(n).divides(&reduced_sum(a, b, c, p, q, n)) {
            witnesses.extend(hits.into_iter().map(|exponent| MannWitness { order: n, exponent }));
        }
    }
    Ok(witnesses)
}
