//! Cyclotomic polynomials and Euler's totient.
//!
//! `Phi_n` is generated from the squarefree kernel: for squarefree `s`,
//! `Phi_s = prod_{d | s} (x^d - 1)^{mu(s/d)}`, evaluated as a product of
//! binomials followed by exact division by binomials, and then
//! `Phi_n(x) = Phi_s(x^{n/s})` with `s = rad(n)`. Every step is exact integer
//! arithmetic and dividing by a binomial is linear in the degree.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::poly::IntPoly;

/// Memo of `n -> Phi_n`, shareable across threads.
///
/// Reads take a shared lock; a miss computes outside the lock and inserts,
/// so concurrent workers may occasionally compute the same entry twice.
#[derive(Debug, Default)]
pub struct CyclotomicTable {
    cache: RwLock<HashMap<u64, Arc<IntPoly>>>,
}

impl CyclotomicTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide table used by [`cyclotomic_poly`].
    pub fn global() -> &'static CyclotomicTable {
        static TABLE: OnceLock<CyclotomicTable> = OnceLock::new();
        TABLE.get_or_init(CyclotomicTable::new)
    }

    pub fn get(&self, n: u64) -> Arc<IntPoly> {
        assert!(n >= 1, "cyclotomic order must be positive");
        if let Some(p) = self.cache.read().expect("cyclotomic cache poisoned").get(&n) {
            return Arc::clone(p);
        }
        let primes = prime_factors(n);
        let rad: u64 = primes.iter().product();
        let poly = if rad == n {
            Arc::new(squarefree_cyclotomic(&primes))
        } else {
            Arc::new(self.get(rad).substitute_power((n / rad) as usize))
        };
        self.cache
            .write()
            .expect("cyclotomic cache poisoned")
            .entry(n)
            .or_insert(poly)
            .clone()
    }

    pub fn len(&self) -> usize {
        self.cache.read().expect("cyclotomic cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `Phi_n`, from the global table.
pub fn cyclotomic_poly(n: u64) -> IntPoly {
    (*CyclotomicTable::global().get(n)).clone()
}

fn squarefree_cyclotomic(primes: &[u64]) -> IntPoly {
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    // Divisors d of n = prod(primes) paired with mu(n/d) = (-1)^{#primes not in d}.
    for mask in 0u32..(1 << primes.len()) {
        let d: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p)
            .product();
        let missing = primes.len() as u32 - mask.count_ones();
        if missing % 2 == 0 {
            numer.push(d);
        } else {
            denom.push(d);
        }
    }
    let mut acc = IntPoly::one();
    for d in numer {
        acc = &acc * &IntPoly::x_pow_minus_one(d as usize);
    }
    for d in denom {
        acc = acc
            .exact_div(&IntPoly::x_pow_minus_one(d as usize))
            .expect("x^d - 1 divides the Moebius numerator");
    }
    acc
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi needs n >= 1");
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// `phi(0..=n)` by sieve; index 0 holds 0.
pub fn totients_up_to(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for p in 2..=n {
        if phi[p] == p as u64 {
            for m in (p..=n).step_by(p) {
                phi[m] -= phi[m] / p as u64;
            }
        }
    }
    phi
}

/// `sum_{k <= bound} phi(k)`.
pub fn phi_sum(bound: u64) -> u64 {
    assert!(bound >= 1, "phi_sum needs bound >= 1");
    totients_up_to(bound as usize).iter().sum()
}
