//! Coxeter polynomials of star-like trees.
//!
//! A star-like tree `T(a0, ..., ar)` has one central vertex with `r + 1`
//! paths of `a_i - 1` edges hanging off it. This crate builds the tree's
//! Coxeter polynomial in exact integer arithmetic, splits it into its
//! cyclotomic part and a Salem (or quadratic Pisot) factor, checks the
//! known order, multiplicity and degree bounds on that split, and computes
//! the dominant root to arbitrary precision so the limiting behaviour of the
//! Salem numbers can be observed.
//!
//! Module map:
//!
//! * [`poly`]: dense polynomials over arbitrary-precision integers.
//! * [`cyclotomic`]: `Phi_n`, Euler's totient and totient sums.
//! * [`coxeter`]: trees and every polynomial attached to them.
//! * [`factorize`]: the cyclotomic sieve, classification, Mann's lemma and
//!   the multiplicity bound.
//! * [`roots`]: certified dominant roots, unit-circle checks and
//!   convergence sweeps.
//! * [`scan`]: batch experiments over families and grids of trees.

pub mod coxeter;
pub mod cyclotomic;
mod error;
pub mod factorize;
pub mod poly;
pub mod roots;
pub mod scan;

pub use coxeter::{BlockDecomposition, StarTree};
pub use cyclotomic::{cyclotomic_poly, euler_phi, phi_sum, CyclotomicTable};
pub use error::{Error, Result};
pub use factorize::{
    Classification, CoxeterFactorization, CyclotomicSplit, MannWitness, MultiplicityBoundTrace,
};
pub use poly::IntPoly;
pub use roots::{ConvergenceRecord, Decimal, DominantRoot, RootCertificate};
pub use scan::{GridSummary, ScanRecord};
