//! Exact apportionment of seats among states.
//!
//! The crate provides a fair randomized scheme (systematic rounding of the
//! fractional quotas after a random relabelling), its adaptation to lower
//! bounds on seat counts, the classical deterministic methods (five divisor
//! methods and largest remainders), and verification tooling: an exact
//! distribution oracle, paradox detectors and a seeded Monte Carlo harness.
//!
//! All quota arithmetic is done with exact rationals. Floating point only
//! appears in simulation summaries.

pub mod divisor;
pub mod error;
pub mod lowerbound;
pub mod montecarlo;
pub mod problem;
pub mod rational;
pub mod rng;
pub mod stochastic;

pub use divisor::{divisor_with_lower_bound, DivisorRule, Method};
pub use error::{Error, Result};
pub use problem::{
    compute_quota, feasible_with_lower_bound, satisfies_quota, Allocation, Audit, LowerBound,
    Problem, QuotaVector,
};
pub use rational::Rational;
pub use rng::SeededSource;
