use crate::poly::IntPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("polynomial {dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: IntPoly, divisor: IntPoly },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("expected a tree with {expected} arms, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("arm lengths must be strictly increasing, got {0:?}")]
    Order(Vec<u32>),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("cannot classify remainder factor {remainder}: {reason}")]
    Classification { remainder: IntPoly, reason: String },

    #[error("could not certify a positive lower bound for min |Q~| on the unit circle with {points} sample points")]
    Certification { points: u64 },

    #[error("no sign change of {0} on (1, Cauchy bound]")]
    NoSignChange(IntPoly),

    #[error("root finder did not converge after {iterations} iterations (last correction {last_correction:e})")]
    NonConvergence { iterations: usize, last_correction: f64 },

    #[error("periodicity violated for k = {k}: a1 = {first} gives {first_divides}, a1 = {second} gives {second_divides}")]
    PeriodicityViolation {
        k: u32,
        first: u32,
        first_divides: bool,
        second: u32,
        second_divides: bool,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
