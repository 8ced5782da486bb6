//! Star-like trees and the polynomials attached to them.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// `T(a0, ..., ar)`: a central vertex with `r + 1` paths of `a_i - 1` edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct StarTree {
    arms: Vec<u32>,
}

impl StarTree {
    /// At least two arms, each `a_i >= 2`. Order is not required.
    pub fn new(arms: Vec<u32>) -> Result<Self> {
        if arms.len() < 2 {
            return Err(Error::InvalidTree(format!(
                "need at least two arms, got {arms:?}"
            )));
        }
        if let Some(a) = arms.iter().find(|&&a| a < 2) {
            return Err(Error::InvalidTree(format!(
                "arm parameter {a} < 2 in {arms:?}"
            )));
        }
        Ok(StarTree { arms })
    }

    pub fn triple(a0: u32, a1: u32, a2: u32) -> Result<Self> {
        Self::new(vec![a0, a1, a2])
    }

    pub fn arms(&self) -> &[u32] {
        &self.arms
    }

    /// Number of arms minus one.
    pub fn r(&self) -> usize {
        self.arms.len() - 1
    }

    pub fn is_strictly_ordered(&self) -> bool {
        self.arms.windows(2).all(|w| w[0] < w[1])
    }

    /// `(2, 3, t)` with `t` in `{4, 5, 6}`: the three-arm trees whose spectral
    /// radius is at most 2, so no Salem factor exists.
    pub fn is_excluded(&self) -> bool {
        matches!(self.arms[..], [2, 3, 4..=6])
    }

    /// Three strictly ordered arms, not excluded: the setting in which the
    /// order and multiplicity bounds are proved.
    pub fn in_three_arm_setting(&self) -> bool {
        self.r() == 2 && self.is_strictly_ordered() && !self.is_excluded()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.arms.iter().map(|&a| a as usize - 1).sum::<usize>()
    }

    /// Undirected edges; vertex 0 is the centre, each arm is a path hanging
    /// off it.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.vertex_count() - 1);
        let mut next = 1;
        for &a in &self.arms {
            let mut prev = 0;
            for _ in 1..a {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        edges
    }
}

impl fmt::Display for StarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arms: Vec<String> = self.arms.iter().map(|a| a.to_string()).collect();
        write!(f, "T({})", arms.join(","))
    }
}

fn binomial(a: u32) -> IntPoly {
    IntPoly::x_pow_minus_one(a as usize)
}

/// `prod (z^{a_i} - 1) * (z + shift) - z * sum_i (z^{a_i - 1} - 1) prod_{j != i} (z^{a_j} - 1)`
///
/// Both the cleared-denominator Coxeter polynomial (`shift = 1`) and the
/// limit polynomial (`shift = 1 - r + k`) have this shape.
fn cleared_form(arms: &[u32], shift: i64) -> IntPoly {
    let factors: Vec<IntPoly> = arms.iter().map(|&a| binomial(a)).collect();
    let full: IntPoly = factors.iter().cloned().product();
    let mut sum = IntPoly::zero();
    for (i, &a) in arms.iter().enumerate() {
        let others = full
            .exact_div(&factors[i])
            .expect("each binomial divides the product");
        sum += &(&binomial(a - 1) * &others);
    }
    let linear = IntPoly::from_coeffs(vec![BigInt::from(shift), BigInt::from(1)]);
    &(&full * &linear) - &sum.shift(1)
}

/// `P(z) = (z - 1)^{r+1} R_T(z)`, expanded from the cleared-denominator form.
pub fn p_polynomial(tree: &StarTree) -> IntPoly {
    cleared_form(tree.arms(), 1)
}

/// The Coxeter polynomial `R_T = P / (z - 1)^{r+1}`.
pub fn coxeter_polynomial(tree: &StarTree) -> Result<IntPoly> {
    let x_minus_one = IntPoly::from_i64s(&[-1, 1]);
    let mut poly = p_polynomial(tree);
    for _ in 0..=tree.r() {
        poly = poly.exact_div(&x_minus_one).map_err(|_| {
            Error::InternalInconsistency(format!(
                "(z-1)^{} does not divide P for {tree}",
                tree.r() + 1
            ))
        })?;
    }
    if poly.degree() != Some(tree.vertex_count()) {
        return Err(Error::InternalInconsistency(format!(
            "deg R_T = {:?} but {tree} has {} vertices",
            poly.degree(),
            tree.vertex_count()
        )));
    }
    Ok(poly)
}

/// `P = z^{high_shift} q + z^{mid_shift} r + s` for a strictly ordered
/// three-arm tree, with `q = z^{a0+1} - 2z^{a0} + 1`,
/// `r = z^{a2-a1+a0-1} - z^{a2-a1} + z^{a0-1} - 1` and
/// `s = -z^{a0+1} + 2z - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub q: IntPoly,
    pub r: IntPoly,
    pub s: IntPoly,
    /// `a1 + a2`
    pub high_shift: usize,
    /// `a1 + 1`
    pub mid_shift: usize,
}

impl BlockDecomposition {
    pub fn reassemble(&self) -> IntPoly {
        &(&self.q.shift(self.high_shift) + &self.r.shift(self.mid_shift)) + &self.s
    }

    pub fn max_block_degree(&self) -> usize {
        [&self.q, &self.r, &self.s]
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }
}

/// Splits `P` into its three sparse blocks and checks the split against the
/// direct expansion.
pub fn qrs_blocks(tree: &StarTree) -> Result<BlockDecomposition> {
    if tree.r() != 2 {
        return Err(Error::Arity {
            expected: 3,
            got: tree.arms().len(),
        });
    }
    if !tree.is_strictly_ordered() {
        return Err(Error::Order(tree.arms().to_vec()));
    }
    let [a0, a1, a2] = [0, 1, 2].map(|i| tree.arms()[i] as usize);
    let delta = a2 - a1;
    let mut q = IntPoly::monomial(1, a0 + 1);
    q -= &IntPoly::monomial(2, a0);
    q += &IntPoly::one();
    let mut r = IntPoly::monomial(1, delta + a0 - 1);
    r -= &IntPoly::monomial(1, delta);
    r += &IntPoly::monomial(1, a0 - 1);
    r -= &IntPoly::one();
    let mut s = IntPoly::monomial(-1, a0 + 1);
    s += &IntPoly::monomial(2, 1);
    s -= &IntPoly::one();
    let blocks = BlockDecomposition {
        q,
        r,
        s,
        high_shift: a1 + a2,
        mid_shift: a1 + 1,
    };
    if blocks.reassemble() != p_polynomial(tree) {
        return Err(Error::InternalInconsistency(format!(
            "block identity fails for {tree}"
        )));
    }
    Ok(blocks)
}

/// The polynomial whose dominant root is the limit of the Salem numbers of
/// `T(prefix, a_{k+1}, ..., a_r)` as the `r - k` trailing arms grow:
///
/// `(z + 1 - r + k) prod_{i<=k} (z^{a_i} - 1) - z sum_{i<=k} (z^{a_i-1} - 1) prod_{j!=i} (z^{a_j} - 1)`
pub fn limit_polynomial(prefix: &[u32], r: usize) -> Result<IntPoly> {
    let k = prefix
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidArgument("empty arm prefix".into()))?;
    if r <= k {
        return Err(Error::InvalidArgument(format!(
            "need r > k, got r = {r}, k = {k}"
        )));
    }
    if prefix.iter().any(|&a| a < 2) {
        return Err(Error::InvalidTree(format!("arm parameter < 2 in {prefix:?}")));
    }
    if !prefix.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Order(prefix.to_vec()));
    }
    Ok(cleared_form(prefix, 1 + k as i64 - r as i64))
}

/// `M_m = x^m - x^{m-1} - ... - x - 1`, whose dominant root is the
/// `m`-bonacci constant.
pub fn mbonacci_poly(m: u32) -> Result<IntPoly> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m-bonacci needs m >= 2, got {m}")));
    }
    let mut coeffs = vec![BigInt::from(-1); m as usize];
    coeffs.push(BigInt::from(1));
    Ok(IntPoly::from_coeffs(coeffs))
}

const POWER_ITERATION_TOL: f64 = 1e-13;
const POWER_ITERATION_CAP: usize = 2_000_000;

/// Largest adjacency eigenvalue.
///
/// Iterates `x <- A x` from the all-ones vector and tracks `|A x| / |x|`.
/// Trees are bipartite, so `-lambda` is an eigenvalue as well and the plain
/// Rayleigh quotient `x.Ax / x.x` does not converge to `lambda`; the norm
/// ratio is the square root of the Rayleigh quotient of `A^2`, which does.
pub fn spectral_radius(tree: &StarTree) -> f64 {
    let n = tree.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in tree.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut prev = 0.0;
    for it in 0..POWER_ITERATION_CAP {
        for (yi, nbrs) in y.iter_mut().zip(&adj) {
            *yi = nbrs.iter().map(|&j| x[j]).sum();
        }
        let est = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / est;
        }
        if it > 0 && (est - prev).abs() <= POWER_ITERATION_TOL * est {
            return est;
        }
        prev = est;
    }
    prev
}
