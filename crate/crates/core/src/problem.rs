//! Problems, quota vectors, allocations and the quota predicates.

use crate::divisor::DivisorAudit;
use crate::error::{Error, Result};
use crate::lowerbound::IterationTrace;
use crate::rational::{self, int, Rational};
use crate::stochastic::SystematicAudit;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// A set of states with positive populations and a house size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    labels: Vec<String>,
    populations: Vec<u64>,
    seats: u64,
}

impl Problem {
    pub fn new(labels: Vec<String>, populations: Vec<u64>, seats: u64) -> Result<Self> {
        if populations.is_empty() {
            return Err(Error::InvalidProblem("at least one state is required".into()));
        }
        if labels.len() != populations.len() {
            return Err(Error::LengthMismatch {
                expected: populations.len(),
                found: labels.len(),
            });
        }
        if let Some(i) = populations.iter().position(|&p| p == 0) {
            return Err(Error::InvalidProblem(format!(
                "state {:?} has zero population",
                labels[i]
            )));
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidProblem(format!("duplicate label {label:?}")));
            }
        }
        Ok(Problem {
            labels,
            populations,
            seats,
        })
    }

    /// States labelled `S1`, `S2`, ... in order.
    pub fn unlabeled(populations: Vec<u64>, seats: u64) -> Result<Self> {
        let labels = (1..=populations.len()).map(|i| format!("S{i}")).collect();
        Problem::new(labels, populations, seats)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn populations(&self) -> &[u64] {
        &self.populations
    }

    pub fn seats(&self) -> u64 {
        self.seats
    }

    pub fn num_states(&self) -> usize {
        self.populations.len()
    }

    pub fn total_population(&self) -> u128 {
        self.populations.iter().map(|&p| p as u128).sum()
    }

    pub fn with_seats(&self, seats: u64) -> Problem {
        Problem {
            seats,
            ..self.clone()
        }
    }

    pub fn with_populations(&self, populations: Vec<u64>) -> Result<Problem> {
        Problem::new(self.labels.clone(), populations, self.seats)
    }
}

/// Exact quotas together with their floors and fractional parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotaVector {
    quotas: Vec<Rational>,
    floors: Vec<u64>,
    fractional: Vec<Rational>,
    seats: u64,
    residual_seats: u64,
    unsatisfied_count: usize,
}

impl QuotaVector {
    /// Builds a quota vector from explicit values. The values must be
    /// non-negative and sum to an integer, which becomes the house size.
    pub fn from_quotas(quotas: Vec<Rational>) -> Result<Self> {
        if quotas.is_empty() {
            return Err(Error::Input("empty quota vector".into()));
        }
        if let Some(q) = quotas.iter().find(|q| q.is_negative()) {
            return Err(Error::Input(format!(
                "negative quota {}",
                rational::format_exact(q)
            )));
        }
        let total = rational::sum(&quotas);
        if !rational::is_integral(&total) {
            return Err(Error::Input(format!(
                "quotas sum to {}, which is not an integer",
                rational::format_exact(&total)
            )));
        }
        let seats = rational::floor_u64(&total)
            .ok_or_else(|| Error::Input("house size does not fit in 64 bits".into()))?;
        let floors: Vec<u64> = quotas
            .iter()
            .map(|q| rational::floor_u64(q).ok_or_else(|| Error::Input("quota too large".into())))
            .collect::<Result<_>>()?;
        let fractional: Vec<Rational> = quotas.iter().map(rational::fract).collect();
        let floor_total: u64 = floors.iter().sum();
        let unsatisfied_count = fractional.iter().filter(|f| !f.is_zero()).count();
        Ok(QuotaVector {
            quotas,
            floors,
            fractional,
            seats,
            residual_seats: seats - floor_total,
            unsatisfied_count,
        })
    }

    pub fn quotas(&self) -> &[Rational] {
        &self.quotas
    }

    pub fn floors(&self) -> &[u64] {
        &self.floors
    }

    pub fn ceilings(&self) -> Vec<u64> {
        self.floors
            .iter()
            .zip(&self.fractional)
            .map(|(&f, frac)| if frac.is_zero() { f } else { f + 1 })
            .collect()
    }

    pub fn fractional(&self) -> &[Rational] {
        &self.fractional
    }

    /// House size `r`, equal to the sum of the quotas.
    pub fn seats(&self) -> u64 {
        self.seats
    }

    /// `r′ = r − Σ⌊qᵢ⌋`, the seats left after every state takes its floor.
    pub fn residual_seats(&self) -> u64 {
        self.residual_seats
    }

    /// Number of states with a non-zero fractional quota.
    pub fn unsatisfied_count(&self) -> usize {
        self.unsatisfied_count
    }

    pub fn len(&self) -> usize {
        self.quotas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotas.is_empty()
    }
}

/// `qᵢ = r·πᵢ/Π` for every state.
pub fn compute_quota(problem: &Problem) -> QuotaVector {
    let total = BigInt::from(problem.total_population());
    let r = BigInt::from(problem.seats());
    let quotas = problem
        .populations()
        .iter()
        .map(|&p| Rational::new(&r * BigInt::from(p), total.clone()))
        .collect();
    QuotaVector::from_quotas(quotas).expect("quotas of a valid problem sum to r")
}

/// Per-state minimum seat counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound(pub Vec<u64>);

impl LowerBound {
    pub fn zeros(states: usize) -> Self {
        LowerBound(vec![0; states])
    }

    pub fn uniform(states: usize, bound: u64) -> Self {
        LowerBound(vec![bound; states])
    }

    pub fn bounds(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
}

/// Replay information attached to an allocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Audit {
    Systematic(SystematicAudit),
    LowerBound {
        draw: SystematicAudit,
        trace: IterationTrace,
    },
    Divisor(DivisorAudit),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub seats: Vec<u64>,
    pub method: String,
    pub seed: Option<u64>,
    pub audit: Option<Audit>,
}

impl Allocation {
    pub fn new(seats: Vec<u64>, method: impl Into<String>) -> Self {
        Allocation {
            seats,
            method: method.into(),
            seed: None,
            audit: None,
        }
    }

    pub fn total(&self) -> u64 {
        self.seats.iter().sum()
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

/// True iff `⌊qᵢ⌋ ≤ αᵢ ≤ ⌈qᵢ⌉` for every state.
pub fn satisfies_quota(seats: &[u64], quota: &QuotaVector) -> Result<bool> {
    check_len(quota.len(), seats.len())?;
    Ok(seats
        .iter()
        .zip(quota.floors().iter().zip(quota.ceilings()))
        .all(|(&a, (&lo, hi))| lo <= a && a <= hi))
}

pub fn has_lower_bound(seats: &[u64], bound: &LowerBound) -> Result<bool> {
    check_len(bound.0.len(), seats.len())?;
    Ok(seats.iter().zip(&bound.0).all(|(a, l)| a >= l))
}

/// Whether some allocation satisfies quota and has lower bound `bound`:
/// `lᵢ ≤ ⌈qᵢ⌉` for all `i` and `Σ max{lᵢ, ⌊qᵢ⌋} ≤ r`.
pub fn feasible_with_lower_bound(quota: &QuotaVector, bound: &LowerBound) -> Result<bool> {
    check_len(quota.len(), bound.0.len())?;
    let ceilings = quota.ceilings();
    if bound.0.iter().zip(&ceilings).any(|(l, c)| l > c) {
        return Ok(false);
    }
    let needed: u64 = bound
        .0
        .iter()
        .zip(quota.floors())
        .map(|(&l, &f)| l.max(f))
        .sum();
    Ok(needed <= quota.seats())
}

/// Rational view of an integer seat vector, handy for comparisons
/// against expectation vectors.
pub fn as_rationals(seats: &[u64]) -> Vec<Rational> {
    seats.iter().map(|&s| int(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn quotas(values: &[(i64, i64)]) -> QuotaVector {
        QuotaVector::from_quotas(values.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    #[test]
    fn quota_of_small_infeasible_example() {
        let q = compute_quota(&Problem::unlabeled(vec![1, 1, 7], 3).unwrap());
        assert_eq!(q.quotas(), &[ratio(1, 3), ratio(1, 3), ratio(7, 3)]);
        assert_eq!(q.floors(), &[0, 0, 2]);
        assert_eq!(q.residual_seats(), 1);
        assert_eq!(q.unsatisfied_count(), 3);
    }

    #[test]
    fn integral_quotas() {
        let q = compute_quota(&Problem::unlabeled(vec![5, 3, 2], 10).unwrap());
        assert_eq!(q.quotas(), &[int(5), int(3), int(2)]);
        assert_eq!(q.residual_seats(), 0);
        assert_eq!(q.unsatisfied_count(), 0);
        assert_eq!(q.ceilings(), vec![5, 3, 2]);
    }

    #[test]
    fn two_state_fractions() {
        let q = compute_quota(&Problem::unlabeled(vec![2, 3], 7).unwrap());
        assert_eq!(q.quotas(), &[ratio(14, 5), ratio(21, 5)]);
        assert_eq!(q.fractional(), &[ratio(4, 5), ratio(1, 5)]);
        assert_eq!(q.residual_seats(), 1);
    }

    #[test]
    fn zero_house_is_all_zero() {
        let q = compute_quota(&Problem::unlabeled(vec![4, 9], 0).unwrap());
        assert_eq!(q.floors(), &[0, 0]);
        assert_eq!(q.residual_seats(), 0);
    }

    #[test]
    fn problem_validation() {
        assert!(Problem::unlabeled(vec![], 3).is_err());
        assert!(Problem::unlabeled(vec![1, 0], 3).is_err());
        assert!(Problem::new(vec!["A".into(), "A".into()], vec![1, 2], 3).is_err());
        assert!(matches!(
            Problem::new(vec!["A".into()], vec![1, 2], 3),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn from_quotas_rejects_fractional_total() {
        assert!(QuotaVector::from_quotas(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(QuotaVector::from_quotas(vec![ratio(-1, 2), ratio(3, 2)]).is_err());
    }

    #[test]
    fn quota_predicate() {
        let q = quotas(&[(1, 3), (1, 3), (7, 3)]);
        assert!(satisfies_quota(&[0, 1, 2], &q).unwrap());
        assert!(!satisfies_quota(&[1, 1, 1], &q).unwrap());
        assert!(satisfies_quota(&[0, 0, 3], &q).unwrap());
        assert!(satisfies_quota(&[5, 3, 2], &quotas(&[(5, 1), (3, 1), (2, 1)])).unwrap());
        assert!(satisfies_quota(&[1, 2], &q).is_err());
    }

    #[test]
    fn lower_bound_feasibility_examples() {
        let q = quotas(&[(1, 3), (1, 3), (7, 3)]);
        assert!(!feasible_with_lower_bound(&q, &LowerBound::uniform(3, 1)).unwrap());
        assert!(feasible_with_lower_bound(&q, &LowerBound::zeros(3)).unwrap());
        let q = quotas(&[(1, 2), (5, 2), (5, 1)]);
        assert!(feasible_with_lower_bound(&q, &LowerBound::uniform(3, 1)).unwrap());
        // 2 > ⌈1/2⌉
        assert!(!feasible_with_lower_bound(&q, &LowerBound(vec![2, 0, 0])).unwrap());
        assert!(feasible_with_lower_bound(&q, &LowerBound(vec![1])).is_err());
    }
}
