//! Deterministic inputs shared by the benchmarks.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starlike::IntPoly;

/// Degree-`deg` polynomial with coefficients of about `bits` bits.
pub fn random_poly(deg: usize, bits: u32, seed: u64) -> IntPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..=deg)
        .map(|_| {
            let words: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.gen()).collect();
            let v = BigInt::from_slice(num_bigint::Sign::Plus, &words);
            if rng.gen_bool(0.5) {
                -v
            } else {
                v
            }
        })
        .collect();
    IntPoly::from_coeffs(coeffs)
}

/// Lehmer's polynomial, the smallest known Salem minimal polynomial.
pub fn lehmer() -> IntPoly {
    IntPoly::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}
