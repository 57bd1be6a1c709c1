//! Seeded Monte Carlo checks and exact stochastic-ordering scans.
//!
//! Replicate `k` always draws from `SeededSource::child(master, k)` and
//! the aggregates are integer sums, so a report does not depend on the
//! thread count or on scheduling.

use crate::divisor::Method;
use crate::error::{Error, Result};
use crate::lowerbound::{final_quota_vector, iterate_lower_bound};
use crate::problem::{compute_quota, LowerBound, Problem};
use crate::rational::{self, Rational};
use crate::rng::SeededSource;
use crate::stochastic::{self, apportion_quota, conditional_sampling_allocate, DEFAULT_RETRY_CAP};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default z-score for [`fairness_test`].
pub const DEFAULT_Z: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimMethod {
    Stochastic,
    LowerBound(LowerBound),
    ConditionalSampling,
    Deterministic(Method),
}

impl SimMethod {
    pub fn name(&self) -> String {
        match self {
            SimMethod::Stochastic => "stochastic".into(),
            SimMethod::LowerBound(_) => "stochastic-lower-bound".into(),
            SimMethod::ConditionalSampling => "conditional-sampling".into(),
            SimMethod::Deterministic(m) => m.name().into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub method: String,
    pub master_seed: u64,
    pub replicates: u64,
    pub seat_sums: Vec<u128>,
    pub seat_square_sums: Vec<u128>,
    pub quota_violations: u64,
    pub lower_bound_violations: u64,
}

impl SimulationReport {
    pub fn exact_mean(&self, i: usize) -> Rational {
        rational::ratio(self.seat_sums[i], self.replicates)
    }

    pub fn means(&self) -> Vec<f64> {
        self.seat_sums
            .iter()
            .map(|&s| s as f64 / self.replicates as f64)
            .collect()
    }

    /// Standard error of each mean, from the unbiased sample variance.
    pub fn std_errors(&self) -> Vec<f64> {
        let n = self.replicates as f64;
        self.seat_sums
            .iter()
            .zip(&self.seat_square_sums)
            .map(|(&s, &sq)| {
                if self.replicates < 2 {
                    return 0.0;
                }
                // n·Σx² − (Σx)² is exact in integers.
                let spread = self.replicates as u128 * sq - s * s;
                let var = spread as f64 / (n * (n - 1.0));
                (var / n).sqrt()
            })
            .collect()
    }
}

/// Per-replicate checks applied by [`simulate_sampler`].
#[derive(Clone, Debug, Default)]
pub struct SampleChecks {
    pub floors: Vec<u64>,
    pub ceilings: Vec<u64>,
    pub lower: Option<Vec<u64>>,
}

#[derive(Clone)]
struct Tally {
    sums: Vec<u128>,
    squares: Vec<u128>,
    quota_violations: u64,
    lower_violations: u64,
}

impl Tally {
    fn new(states: usize) -> Self {
        Tally {
            sums: vec![0; states],
            squares: vec![0; states],
            quota_violations: 0,
            lower_violations: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            *a += b;
        }
        for (a, b) in self.squares.iter_mut().zip(other.squares) {
            *a += b;
        }
        self.quota_violations += other.quota_violations;
        self.lower_violations += other.lower_violations;
        self
    }
}

/// Runs `n` replicates of `sampler`, one child stream each.
pub fn simulate_sampler<F>(
    label: &str,
    states: usize,
    master_seed: u64,
    n: u64,
    checks: &SampleChecks,
    sampler: F,
) -> Result<SimulationReport>
where
    F: Fn(&mut SeededSource) -> Result<Vec<u64>> + Sync,
{
    if n == 0 {
        return Err(Error::Input("at least one replicate is required".into()));
    }
    let tally = (0..n)
        .into_par_iter()
        .try_fold(
            || Tally::new(states),
            |mut t, k| -> Result<Tally> {
                let seats = sampler(&mut SeededSource::child(master_seed, k))?;
                if seats.len() != states {
                    return Err(Error::LengthMismatch {
                        expected: states,
                        found: seats.len(),
                    });
                }
                let mut breaks_quota = false;
                for (i, &a) in seats.iter().enumerate() {
                    t.sums[i] += a as u128;
                    t.squares[i] += a as u128 * a as u128;
                    if !checks.floors.is_empty() && (a < checks.floors[i] || a > checks.ceilings[i]) {
                        breaks_quota = true;
                    }
                }
                t.quota_violations += u64::from(breaks_quota);
                if let Some(lower) = &checks.lower {
                    t.lower_violations += u64::from(seats.iter().zip(lower).any(|(a, l)| a < l));
                }
                Ok(t)
            },
        )
        .try_reduce(|| Tally::new(states), |a, b| Ok(a.merge(b)))?;
    Ok(SimulationReport {
        method: label.into(),
        master_seed,
        replicates: n,
        seat_sums: tally.sums,
        seat_square_sums: tally.squares,
        quota_violations: tally.quota_violations,
        lower_bound_violations: tally.lower_violations,
    })
}

pub fn simulate(method: &SimMethod, problem: &Problem, master_seed: u64, n: u64) -> Result<SimulationReport> {
    let quota = compute_quota(problem);
    let mut checks = SampleChecks {
        floors: quota.floors().to_vec(),
        ceilings: quota.ceilings(),
        lower: None,
    };
    let label = method.name();
    let s = problem.num_states();
    match method {
        SimMethod::Stochastic => simulate_sampler(&label, s, master_seed, n, &checks, |src| {
            Ok(apportion_quota(&quota, src)?.0)
        }),
        SimMethod::LowerBound(bound) => {
            let composite = final_quota_vector(&iterate_lower_bound(&quota, bound)?)?;
            checks.lower = Some(bound.0.clone());
            simulate_sampler(&label, s, master_seed, n, &checks, |src| {
                Ok(apportion_quota(&composite, src)?.0)
            })
        }
        SimMethod::ConditionalSampling => simulate_sampler(&label, s, master_seed, n, &checks, |src| {
            let extra = conditional_sampling_allocate(
                quota.fractional(),
                quota.residual_seats(),
                src,
                DEFAULT_RETRY_CAP,
            )?;
            Ok(quota
                .floors()
                .iter()
                .zip(extra)
                .map(|(&f, e)| f + e as u64)
                .collect())
        }),
        SimMethod::Deterministic(m) => {
            let seats = m.apportion(problem)?.seats;
            simulate_sampler(&label, s, master_seed, n, &checks, |_| Ok(seats.clone()))
        }
    }
}

/// Counts of each distinct outcome over `n` seeded replicates.
pub fn empirical_distribution<F>(master_seed: u64, n: u64, sampler: F) -> Result<BTreeMap<Vec<u64>, u64>>
where
    F: Fn(&mut SeededSource) -> Result<Vec<u64>> + Sync,
{
    (0..n)
        .into_par_iter()
        .try_fold(BTreeMap::new, |mut counts, k| -> Result<_> {
            *counts.entry(sampler(&mut SeededSource::child(master_seed, k))?).or_insert(0u64) += 1;
            Ok(counts)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (key, c) in b {
                *a.entry(key).or_insert(0) += c;
            }
            Ok(a)
        })
}

/// Total-variation distance between empirical counts and an exact law.
pub fn total_variation(counts: &BTreeMap<Vec<u64>, u64>, law: &stochastic::AllocationDistribution) -> f64 {
    let n: u64 = counts.values().sum();
    let mut keys: Vec<&Vec<u64>> = counts.keys().collect();
    keys.extend(law.support().iter().map(|(a, _)| a));
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|k| {
            let empirical = counts.get(k).copied().unwrap_or(0) as f64 / n as f64;
            (empirical - rational::to_f64(&law.probability_of(k))).abs()
        })
        .sum::<f64>()
        / 2.0
}

/// Per-state verdict `|mean − targetᵢ| ≤ z · SE`. With zero spread the
/// mean must equal the target exactly.
pub fn fairness_test(report: &SimulationReport, targets: &[Rational], z: f64) -> Result<Vec<bool>> {
    if targets.len() != report.seat_sums.len() {
        return Err(Error::LengthMismatch {
            expected: report.seat_sums.len(),
            found: targets.len(),
        });
    }
    let means = report.means();
    let errors = report.std_errors();
    Ok(targets
        .iter()
        .enumerate()
        .map(|(i, q)| {
            if errors[i] == 0.0 {
                report.exact_mean(i) == *q
            } else {
                (means[i] - rational::to_f64(q)).abs() <= z * errors[i]
            }
        })
        .collect())
}

/// Law of one state's seat count.
pub type Marginal = BTreeMap<u64, Rational>;

/// `lower ≤st upper`: `P(lower ≤ x) ≥ P(upper ≤ x)` at every `x`.
pub fn stochastic_dominance(lower: &Marginal, upper: &Marginal) -> bool {
    let mut points: Vec<u64> = lower.keys().chain(upper.keys()).copied().collect();
    points.sort_unstable();
    points.dedup();
    let cdf = |m: &Marginal, x: u64| -> Rational {
        m.range(..=x).fold(Rational::zero(), |acc, (_, p)| acc + p)
    };
    points.into_iter().all(|x| cdf(lower, x) >= cdf(upper, x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotonicityPair {
    /// `heads` people move from state `from` to state `to`.
    PopulationMove {
        before: Problem,
        from: usize,
        to: usize,
        heads: u64,
    },
    /// The house grows by one seat.
    HouseIncrease { before: Problem },
}

impl MonotonicityPair {
    pub fn after(&self) -> Result<Problem> {
        match self {
            MonotonicityPair::PopulationMove {
                before,
                from,
                to,
                heads,
            } => {
                let mut pops = before.populations().to_vec();
                if from == to || *from >= pops.len() || *to >= pops.len() || pops[*from] <= *heads {
                    return Err(Error::Input("population move must leave the donor non-empty".into()));
                }
                pops[*from] -= heads;
                pops[*to] += heads;
                before.with_populations(pops)
            }
            MonotonicityPair::HouseIncrease { before } => Ok(before.with_seats(before.seats() + 1)),
        }
    }

    pub fn before(&self) -> &Problem {
        match self {
            MonotonicityPair::PopulationMove { before, .. } | MonotonicityPair::HouseIncrease { before } => before,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub pair: usize,
    pub holds: bool,
    /// States whose exact seat law moved the wrong way.
    pub failing_states: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub verdicts: Vec<MonotonicityVerdict>,
    pub passed: usize,
    pub failed: usize,
}

impl MonotonicityReport {
    pub fn failures(&self) -> impl Iterator<Item = &MonotonicityVerdict> {
        self.verdicts.iter().filter(|v| !v.holds)
    }
}

/// Exact-marginal dominance checks: after a move from `i` to `j`, `Aᵢ`
/// must not increase and `Aⱼ` must not decrease stochastically; after
/// `r → r + 1` no state's law may decrease.
pub fn monotonicity_scan(pairs: &[MonotonicityPair]) -> Result<MonotonicityReport> {
    let verdicts = pairs
        .par_iter()
        .enumerate()
        .map(|(index, pair)| -> Result<MonotonicityVerdict> {
            let before = stochastic::exact_distribution(pair.before())?;
            let after = stochastic::exact_distribution(&pair.after()?)?;
            let mut failing = Vec::new();
            match pair {
                MonotonicityPair::PopulationMove { from, to, .. } => {
                    if !stochastic_dominance(&after.marginal(*from), &before.marginal(*from)) {
                        failing.push(*from);
                    }
                    if !stochastic_dominance(&before.marginal(*to), &after.marginal(*to)) {
                        failing.push(*to);
                    }
                }
                MonotonicityPair::HouseIncrease { before: p } => {
                    for i in 0..p.num_states() {
                        if !stochastic_dominance(&before.marginal(i), &after.marginal(i)) {
                            failing.push(i);
                        }
                    }
                }
            }
            Ok(MonotonicityVerdict {
                pair: index,
                holds: failing.is_empty(),
                failing_states: failing,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = verdicts.iter().filter(|v| v.holds).count();
    Ok(MonotonicityReport {
        failed: verdicts.len() - passed,
        passed,
        verdicts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotonicityKind {
    PopulationMove,
    HouseIncrease,
}

/// Seeded corpus of `count` pairs with `1..=max_states` states.
pub fn random_monotonicity_corpus(
    seed: u64,
    count: usize,
    kind: MonotonicityKind,
    max_states: usize,
    max_population: u64,
    max_seats: u64,
) -> Vec<MonotonicityPair> {
    let mut src = SeededSource::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let min_states = if kind == MonotonicityKind::PopulationMove { 2 } else { 1 };
        let s = min_states + src.below((max_states - min_states + 1) as u64) as usize;
        let pops: Vec<u64> = (0..s).map(|_| 2 + src.below(max_population - 1)).collect();
        let before = Problem::unlabeled(pops.clone(), src.below(max_seats + 1)).expect("positive");
        match kind {
            MonotonicityKind::HouseIncrease => out.push(MonotonicityPair::HouseIncrease { before }),
            MonotonicityKind::PopulationMove => {
                let from = src.below(s as u64) as usize;
                let to = (from + 1 + src.below(s as u64 - 1) as usize) % s;
                let heads = 1 + src.below(pops[from] - 1);
                out.push(MonotonicityPair::PopulationMove {
                    before,
                    from,
                    to,
                    heads,
                });
            }
        }
    }
    out
}
