//! Randomized apportionment under per-state lower bounds.
//!
//! States are split into small (`qᵢ < lᵢ`), exact (`qᵢ = lᵢ`) and surplus
//! (`qᵢ > lᵢ`). Small and exact states receive exactly `lᵢ`; the surplus
//! states share the remaining `μ` seats with equal representation, i.e.
//! quotas `Qᵢ = γqᵢ` with `γ = μ / Σ_{I₊} qᵢ`. A surplus state with
//! `Qᵢ < ⌊qᵢ⌋` (an offender) would break quota; the iterated scheme fixes
//! every offender of a round at `⌊qᵢ⌋` and rescales the rest.

use crate::error::{Error, Result};
use crate::problem::{compute_quota, Allocation, Audit, LowerBound, Problem, QuotaVector};
use crate::rational::{self, int, Rational};
use crate::rng::SeededSource;
use crate::stochastic::{self, AllocationDistribution};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum BoundViolation {
    /// `lᵢ > ⌈qᵢ⌉`
    AboveUpperQuota { state: usize, bound: u64, ceiling: u64 },
    /// `Σ lᵢ > r`
    BoundsExceedSeats { total: u64, seats: u64 },
    /// `Σ max{lᵢ, ⌊qᵢ⌋} > r`
    FloorsExceedSeats { total: u64, seats: u64 },
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundViolation::AboveUpperQuota { state, bound, ceiling } => write!(
                f,
                "state {} has lower bound {bound} above its upper quota {ceiling}",
                state + 1
            ),
            BoundViolation::BoundsExceedSeats { total, seats } => {
                write!(f, "lower bounds total {total} exceeds the house size {seats}")
            }
            BoundViolation::FloorsExceedSeats { total, seats } => write!(
                f,
                "sum of max(lower bound, lower quota) is {total}, above the house size {seats}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateClassification {
    /// `I₋ = {i : qᵢ < lᵢ}`
    pub small: Vec<usize>,
    /// `I₌ = {i : qᵢ = lᵢ}`
    pub exact: Vec<usize>,
    /// `I₊ = {i : qᵢ > lᵢ}`
    pub surplus: Vec<usize>,
    /// `μ = r − Σ_{I₋ ∪ I₌} lᵢ`
    pub remaining_seats: u64,
}

fn check_len(quota: &QuotaVector, bound: &LowerBound) -> Result<()> {
    if quota.len() != bound.0.len() {
        return Err(Error::LengthMismatch {
            expected: quota.len(),
            found: bound.0.len(),
        });
    }
    Ok(())
}

/// Partitions the states against `bound`. Requires `lᵢ ≤ ⌈qᵢ⌉` for all `i`
/// and `Σ lᵢ ≤ r`; violations are reported individually.
pub fn classify(quota: &QuotaVector, bound: &LowerBound) -> Result<StateClassification> {
    check_len(quota, bound)?;
    let mut violations: Vec<BoundViolation> = bound
        .0
        .iter()
        .zip(quota.ceilings())
        .enumerate()
        .filter(|(_, (&l, c))| l > *c)
        .map(|(state, (&bound, ceiling))| BoundViolation::AboveUpperQuota {
            state,
            bound,
            ceiling,
        })
        .collect();
    if bound.total() > quota.seats() {
        violations.push(BoundViolation::BoundsExceedSeats {
            total: bound.total(),
            seats: quota.seats(),
        });
    }
    if !violations.is_empty() {
        return Err(Error::InfeasibleBound(violations));
    }
    let mut cls = StateClassification {
        small: Vec::new(),
        exact: Vec::new(),
        surplus: Vec::new(),
        remaining_seats: quota.seats(),
    };
    for (i, (q, &l)) in quota.quotas().iter().zip(&bound.0).enumerate() {
        let l_rat = int(l);
        if *q < l_rat {
            cls.small.push(i);
            cls.remaining_seats -= l;
        } else if *q == l_rat {
            cls.exact.push(i);
            cls.remaining_seats -= l;
        } else {
            cls.surplus.push(i);
        }
    }
    Ok(cls)
}

/// Equal-representation quotas `Qᵢ = γqᵢ` on the surplus states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjustedQuota {
    /// Surplus state indices; the vectors below are aligned with them.
    pub indices: Vec<usize>,
    #[serde(with = "rational::serde_rational")]
    pub gamma: Rational,
    #[serde(with = "rational::serde_rational_vec")]
    pub values: Vec<Rational>,
    #[serde(with = "rational::serde_rational_vec")]
    pub quotas: Vec<Rational>,
    pub floors: Vec<u64>,
    pub ceilings: Vec<u64>,
    pub condition_c_holds: bool,
    /// Original indices with `Qᵢ < ⌊qᵢ⌋`.
    pub offenders: Vec<usize>,
}

fn scale_active(quota: &QuotaVector, active: &[usize], available: &Rational) -> AdjustedQuota {
    let mass = rational::sum(active.iter().map(|&i| &quota.quotas()[i]));
    let gamma = available / mass;
    let ceilings = quota.ceilings();
    let mut adjusted = AdjustedQuota {
        indices: active.to_vec(),
        gamma: gamma.clone(),
        values: Vec::with_capacity(active.len()),
        quotas: Vec::with_capacity(active.len()),
        floors: Vec::with_capacity(active.len()),
        ceilings: Vec::with_capacity(active.len()),
        condition_c_holds: true,
        offenders: Vec::new(),
    };
    for &i in active {
        let q = &quota.quotas()[i];
        let value = &gamma * q;
        let floor = quota.floors()[i];
        if value < int(floor) {
            adjusted.offenders.push(i);
        }
        adjusted.values.push(value);
        adjusted.quotas.push(q.clone());
        adjusted.floors.push(floor);
        adjusted.ceilings.push(ceilings[i]);
    }
    adjusted.condition_c_holds = adjusted.offenders.is_empty();
    adjusted
}

pub fn equal_representation_quota(cls: &StateClassification, quota: &QuotaVector) -> Result<AdjustedQuota> {
    if cls.surplus.is_empty() {
        return Err(Error::Logic("no surplus states to rescale".into()));
    }
    Ok(scale_active(quota, &cls.surplus, &int(cls.remaining_seats)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationBound {
    /// `Σ_{I₊} max{1, ⌊qᵢ⌋ − Qᵢ} · 1{Qᵢ < ⌊qᵢ⌋}`, evaluated as written.
    #[serde(with = "rational::serde_rational")]
    pub bound: Rational,
    /// `Σ min{1, ⌊qᵢ⌋ − Qᵢ}` over offenders: the union bound on the
    /// probability that some offender falls below its lower quota.
    #[serde(with = "rational::serde_rational")]
    pub gap_sum: Rational,
    /// `(state, ⌊qᵢ⌋ − Qᵢ)` per offender.
    pub gaps: Vec<OffenderGap>,
    /// At most one offender, so the probability of breaking quota equals
    /// `gap_sum`.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffenderGap {
    pub state: usize,
    #[serde(with = "rational::serde_rational")]
    pub gap: Rational,
}

pub fn violation_probability_bound(adjusted: &AdjustedQuota) -> ViolationBound {
    let mut out = ViolationBound {
        bound: Rational::zero(),
        gap_sum: Rational::zero(),
        gaps: Vec::new(),
        exact: adjusted.offenders.len() <= 1,
    };
    for (k, &state) in adjusted.indices.iter().enumerate() {
        let gap = int(adjusted.floors[k]) - &adjusted.values[k];
        if gap.is_positive() {
            out.bound += (&gap).max(&Rational::one()).clone();
            out.gap_sum += (&gap).min(&Rational::one()).clone();
            out.gaps.push(OffenderGap { state, gap });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub active: Vec<usize>,
    #[serde(with = "rational::serde_rational")]
    pub gamma: Rational,
    /// Offenders fixed at their lower quota in this round.
    pub fixed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub classification: Option<StateClassification>,
    pub rounds: Vec<Round>,
    pub final_active: Vec<usize>,
    /// `lᵢ` on small and exact states, `⌊qᵢ⌋` on fixed offenders and the
    /// rescaled quota on the final active set. Empty when classification
    /// fails.
    #[serde(with = "rational::serde_rational_vec")]
    pub final_quota: Vec<Rational>,
    pub feasible: bool,
    pub diagnostics: Vec<BoundViolation>,
}

/// Rescales the surplus states, fixing all offenders of a round at once,
/// until a round has no offenders or no active state remains.
pub fn iterate_lower_bound(quota: &QuotaVector, bound: &LowerBound) -> Result<IterationTrace> {
    check_len(quota, bound)?;
    let cls = match classify(quota, bound) {
        Ok(cls) => cls,
        Err(Error::InfeasibleBound(diagnostics)) => {
            return Ok(IterationTrace {
                classification: None,
                rounds: Vec::new(),
                final_active: Vec::new(),
                final_quota: Vec::new(),
                feasible: false,
                diagnostics,
            })
        }
        Err(e) => return Err(e),
    };
    let mut final_quota = quota.quotas().to_vec();
    for &i in cls.small.iter().chain(&cls.exact) {
        final_quota[i] = int(bound.0[i]);
    }
    let mut active = cls.surplus.clone();
    let mut available = int(cls.remaining_seats);
    let mut rounds = Vec::new();
    while !active.is_empty() {
        let adjusted = scale_active(quota, &active, &available);
        rounds.push(Round {
            active: active.clone(),
            gamma: adjusted.gamma.clone(),
            fixed: adjusted.offenders.clone(),
        });
        if adjusted.condition_c_holds {
            for (&i, value) in adjusted.indices.iter().zip(adjusted.values) {
                final_quota[i] = value;
            }
            break;
        }
        for &i in &adjusted.offenders {
            let floor = quota.floors()[i];
            final_quota[i] = int(floor);
            available -= int(floor);
        }
        active.retain(|i| !adjusted.offenders.contains(i));
    }
    let ceilings = quota.ceilings();
    let within = final_quota
        .iter()
        .enumerate()
        .all(|(i, v)| *v >= int(quota.floors()[i]) && *v <= int(ceilings[i]));
    let feasible = within && rational::sum(&final_quota) == int(quota.seats());
    let mut diagnostics = Vec::new();
    if !feasible {
        let total: u64 = bound
            .0
            .iter()
            .zip(quota.floors())
            .map(|(&l, &f)| l.max(f))
            .sum();
        diagnostics.push(BoundViolation::FloorsExceedSeats {
            total,
            seats: quota.seats(),
        });
    }
    Ok(IterationTrace {
        classification: Some(cls),
        rounds,
        final_active: active,
        final_quota,
        feasible,
        diagnostics,
    })
}

/// The composite quota vector of a feasible trace.
pub fn final_quota_vector(trace: &IterationTrace) -> Result<QuotaVector> {
    if !trace.feasible {
        return Err(Error::InfeasibleTrace(Box::new(trace.clone())));
    }
    QuotaVector::from_quotas(trace.final_quota.clone())
}

/// Iterated lower-bound scheme followed by steps I-III on the final quota
/// vector. Small and exact states get `lᵢ`, fixed offenders `⌊qᵢ⌋`.
pub fn lower_bound_apportion(problem: &Problem, bound: &LowerBound, src: &mut SeededSource) -> Result<Allocation> {
    let quota = compute_quota(problem);
    let trace = iterate_lower_bound(&quota, bound)?;
    let composite = final_quota_vector(&trace)?;
    let (seats, draw) = stochastic::apportion_quota(&composite, src)?;
    Ok(Allocation {
        seats,
        method: "stochastic".into(),
        seed: Some(src.seed()),
        audit: Some(Audit::LowerBound { draw, trace }),
    })
}

/// Exact law of [`lower_bound_apportion`].
pub fn lower_bound_distribution(quota: &QuotaVector, bound: &LowerBound, limit: usize) -> Result<AllocationDistribution> {
    let trace = iterate_lower_bound(quota, bound)?;
    stochastic::exact_distribution_of(&final_quota_vector(&trace)?, limit)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResampleOutcome {
    /// Seats of the surplus states, aligned with `AdjustedQuota::indices`.
    pub seats: Vec<u64>,
    pub attempts: u64,
}

fn within_quota(seats: &[u64], adjusted: &AdjustedQuota) -> bool {
    seats
        .iter()
        .zip(adjusted.floors.iter().zip(&adjusted.ceilings))
        .all(|(a, (lo, hi))| lo <= a && a <= hi)
}

/// Runs the plain scheme on `Q` until the outcome satisfies the original
/// quota. Kept as a reference: conditioning on success shifts the
/// expectations away from `Q`.
pub fn resample_until_quota(adjusted: &AdjustedQuota, src: &mut SeededSource, cap: u64) -> Result<ResampleOutcome> {
    let target = QuotaVector::from_quotas(adjusted.values.clone())?;
    for attempt in 1..=cap {
        let (seats, _) = stochastic::apportion_quota(&target, src)?;
        if within_quota(&seats, adjusted) {
            return Ok(ResampleOutcome {
                seats,
                attempts: attempt,
            });
        }
    }
    Err(Error::Convergence { attempts: cap })
}

/// Per-round acceptance probability and the exact law of the accepted
/// outcome of [`resample_until_quota`].
pub fn resample_until_quota_law(adjusted: &AdjustedQuota, limit: usize) -> Result<(Rational, AllocationDistribution)> {
    let target = QuotaVector::from_quotas(adjusted.values.clone())?;
    let law = stochastic::exact_distribution_of(&target, limit)?;
    law.condition(|seats| within_quota(seats, adjusted))
        .ok_or_else(|| Error::Infeasible("no outcome on Q satisfies quota".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledFractional {
    pub delta: Rational,
    /// `q″ᵢ = δq′ᵢ`, aligned with the surplus states.
    pub values: Vec<Rational>,
}

/// Shrinks the surplus fractional quotas by one factor `δ` so that
/// `Σ_{I₊} (⌊qᵢ⌋ + q″ᵢ) = μ`. Simpler than equal representation but not fair.
pub fn scaled_fractional_quota(quota: &QuotaVector, cls: &StateClassification) -> Result<ScaledFractional> {
    let frac_mass = rational::sum(cls.surplus.iter().map(|&i| &quota.fractional()[i]));
    if frac_mass.is_zero() {
        return Err(Error::Range("surplus states have no fractional quota to scale".into()));
    }
    let floors: u64 = cls.surplus.iter().map(|&i| quota.floors()[i]).sum();
    let delta = (int(cls.remaining_seats) - int(floors)) / frac_mass;
    let values: Vec<Rational> = cls
        .surplus
        .iter()
        .map(|&i| &delta * &quota.fractional()[i])
        .collect();
    if delta.is_negative() || values.iter().any(|v| *v >= Rational::one()) {
        return Err(Error::Range(format!(
            "scaling factor {} leaves [0, 1)",
            rational::format_exact(&delta)
        )));
    }
    Ok(ScaledFractional { delta, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, ratio};

    fn qv(values: &[&str]) -> QuotaVector {
        QuotaVector::from_quotas(values.iter().map(|v| parse_rational(v).unwrap()).collect()).unwrap()
    }

    #[test]
    fn classify_examples() {
        let q = qv(&["0.5", "2.5", "5"]);
        let cls = classify(&q, &LowerBound::uniform(3, 1)).unwrap();
        assert_eq!(cls.small, vec![0]);
        assert!(cls.exact.is_empty());
        assert_eq!(cls.surplus, vec![1, 2]);
        assert_eq!(cls.remaining_seats, 7);

        let cls = classify(&q, &LowerBound::zeros(3)).unwrap();
        assert_eq!(cls.surplus, vec![0, 1, 2]);
        assert_eq!(cls.remaining_seats, 8);

        let q = qv(&["1/3", "1/3", "7/3"]);
        let cls = classify(&q, &LowerBound::uniform(3, 1)).unwrap();
        assert_eq!(cls.small, vec![0, 1]);
        assert_eq!(cls.remaining_seats, 1);
    }

    #[test]
    fn classify_reports_each_violation() {
        let q = qv(&["0.5", "2.5", "5"]);
        match classify(&q, &LowerBound(vec![2, 4, 3])) {
            Err(Error::InfeasibleBound(v)) => {
                assert!(v.contains(&BoundViolation::AboveUpperQuota { state: 0, bound: 2, ceiling: 1 }));
                assert!(v.contains(&BoundViolation::AboveUpperQuota { state: 1, bound: 4, ceiling: 3 }));
                assert!(v.contains(&BoundViolation::BoundsExceedSeats { total: 9, seats: 8 }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_and_offenders() {
        let q = qv(&["0.5", "2.5", "5"]);
        let cls = classify(&q, &LowerBound::uniform(3, 1)).unwrap();
        let adj = equal_representation_quota(&cls, &q).unwrap();
        assert_eq!(adj.gamma, ratio(14, 15));
        assert_eq!(adj.values, vec![ratio(7, 3), ratio(14, 3)]);
        assert_eq!(adj.offenders, vec![2]);
        assert!(!adj.condition_c_holds);

        let cls = classify(&q, &LowerBound::zeros(3)).unwrap();
        let adj = equal_representation_quota(&cls, &q).unwrap();
        assert_eq!(adj.gamma, int(1));
        assert_eq!(adj.values, q.quotas());
    }

    #[test]
    fn empty_surplus_is_a_logic_error() {
        let q = qv(&["1", "2"]);
        let cls = classify(&q, &LowerBound(vec![1, 2])).unwrap();
        assert!(matches!(equal_representation_quota(&cls, &q), Err(Error::Logic(_))));
    }

    #[test]
    fn bound_is_zero_without_offenders() {
        let q = qv(&["0.5", "2.5", "5"]);
        let cls = classify(&q, &LowerBound::zeros(3)).unwrap();
        let b = violation_probability_bound(&equal_representation_quota(&cls, &q).unwrap());
        assert!(b.bound.is_zero() && b.gap_sum.is_zero() && b.gaps.is_empty());
    }

    #[test]
    fn verbatim_bound_versus_gap_sum() {
        let q = qv(&["0.5", "2.5", "5"]);
        let cls = classify(&q, &LowerBound::uniform(3, 1)).unwrap();
        let b = violation_probability_bound(&equal_representation_quota(&cls, &q).unwrap());
        assert_eq!(b.gaps, vec![OffenderGap { state: 2, gap: ratio(1, 3) }]);
        assert_eq!(b.gap_sum, ratio(1, 3));
        assert_eq!(b.bound, int(1));
        assert!(b.exact);
    }

    #[test]
    fn iteration_fixes_offender_then_settles() {
        let q = qv(&["0.5", "2.5", "5"]);
        let trace = iterate_lower_bound(&q, &LowerBound::uniform(3, 1)).unwrap();
        assert!(trace.feasible);
        assert_eq!(trace.rounds.len(), 2);
        assert_eq!(trace.rounds[0].fixed, vec![2]);
        assert_eq!(trace.rounds[1].gamma, ratio(4, 5));
        assert_eq!(trace.final_active, vec![1]);
        assert_eq!(trace.final_quota, vec![int(1), int(2), int(5)]);
        let p = Problem::unlabeled(vec![1, 5, 10], 8).unwrap();
        for seed in 0..10 {
            let a = lower_bound_apportion(&p, &LowerBound::uniform(3, 1), &mut SeededSource::new(seed)).unwrap();
            assert_eq!(a.seats, vec![1, 2, 5]);
        }
    }

    #[test]
    fn iteration_without_small_states_is_one_round() {
        let q = qv(&["1.5", "2.5", "5"]);
        let trace = iterate_lower_bound(&q, &LowerBound::uniform(3, 1)).unwrap();
        assert_eq!(trace.rounds.len(), 1);
        assert_eq!(trace.rounds[0].gamma, int(1));
        assert_eq!(trace.final_quota, q.quotas());
    }

    #[test]
    fn infeasible_small_example() {
        let q = qv(&["1/3", "1/3", "7/3"]);
        let trace = iterate_lower_bound(&q, &LowerBound::uniform(3, 1)).unwrap();
        assert!(!trace.feasible);
        assert!(trace.final_active.is_empty());
        assert_eq!(trace.diagnostics, vec![BoundViolation::FloorsExceedSeats { total: 4, seats: 3 }]);
        let p = Problem::unlabeled(vec![1, 1, 7], 3).unwrap();
        assert!(matches!(
            lower_bound_apportion(&p, &LowerBound::uniform(3, 1), &mut SeededSource::new(0)),
            Err(Error::InfeasibleTrace(_))
        ));
    }

    #[test]
    fn classify_failure_carries_diagnostics() {
        let q = qv(&["1/3", "1/3", "7/3"]);
        let trace = iterate_lower_bound(&q, &LowerBound(vec![2, 0, 0])).unwrap();
        assert!(!trace.feasible && trace.classification.is_none());
        assert_eq!(trace.diagnostics.len(), 1);
    }

    #[test]
    fn zero_bound_matches_plain_scheme() {
        let p = Problem::unlabeled(vec![3, 8, 5, 11], 9).unwrap();
        for seed in 0..50 {
            let plain = stochastic::stochastic_apportion(&p, &mut SeededSource::new(seed));
            let bounded = lower_bound_apportion(&p, &LowerBound::zeros(4), &mut SeededSource::new(seed)).unwrap();
            assert_eq!(plain.seats, bounded.seats);
        }
    }

    #[test]
    fn scaled_fractional_examples() {
        let q = qv(&["1.5", "2.5", "5"]);
        let cls = classify(&q, &LowerBound::zeros(3)).unwrap();
        let s = scaled_fractional_quota(&q, &cls).unwrap();
        assert_eq!(s.delta, int(1));
        assert_eq!(s.values, vec![ratio(1, 2), ratio(1, 2), int(0)]);

        let q = qv(&["0.5", "2.3", "5.2"]);
        let cls = classify(&q, &LowerBound::uniform(3, 1)).unwrap();
        let s = scaled_fractional_quota(&q, &cls).unwrap();
        assert!(s.delta.is_zero());
        assert_eq!(s.values, vec![int(0), int(0)]);

        let q = qv(&["0.5", "2.6", "4.9"]);
        let cls = classify(&q, &LowerBound::uniform(3, 1)).unwrap();
        let s = scaled_fractional_quota(&q, &cls).unwrap();
        assert_eq!(s.delta, ratio(2, 3));
        assert_eq!(s.values, vec![ratio(2, 5), ratio(3, 5)]);
    }

    #[test]
    fn scaled_fractional_range_errors() {
        let q = qv(&["1/3", "1/3", "7/3"]);
        let cls = classify(&q, &LowerBound::uniform(3, 1)).unwrap();
        assert!(matches!(scaled_fractional_quota(&q, &cls), Err(Error::Range(_))));
        let q = qv(&["0.5", "0.5", "3", "4"]);
        let cls = classify(&q, &LowerBound::uniform(4, 1)).unwrap();
        assert!(matches!(scaled_fractional_quota(&q, &cls), Err(Error::Range(_))));
    }

    #[test]
    fn resample_without_offenders_takes_one_run() {
        let q = qv(&["1.5", "2.5", "5"]);
        let cls = classify(&q, &LowerBound::zeros(3)).unwrap();
        let adj = equal_representation_quota(&cls, &q).unwrap();
        let mut src = SeededSource::new(1);
        assert_eq!(resample_until_quota(&adj, &mut src, 1).unwrap().attempts, 1);
        let (accept, _) = resample_until_quota_law(&adj, 8).unwrap();
        assert_eq!(accept, int(1));
    }

    #[test]
    fn resample_conditional_law_is_unfair() {
        // q = (0.5, 1.02, 2.48), l = 1: Q = (153/175, 372/175) and state 2 offends.
        let q = qv(&["0.5", "1.02", "2.48"]);
        let cls = classify(&q, &LowerBound::uniform(3, 1)).unwrap();
        let adj = equal_representation_quota(&cls, &q).unwrap();
        assert_eq!(adj.offenders, vec![1]);
        let (accept, law) = resample_until_quota_law(&adj, 8).unwrap();
        assert_eq!(accept, ratio(153, 175));
        assert_eq!(law.expectations(), vec![int(1), int(2)]);
        assert_ne!(law.expectations(), adj.values);
    }
}
