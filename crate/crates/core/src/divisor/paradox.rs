//! Detectors for the Alabama, population and new-state paradoxes, and the
//! quota-staying scan.

use super::Method;
use crate::error::{Error, Result};
use crate::problem::{compute_quota, Problem};
use crate::rational::{int, ratio};
use crate::rng::SeededSource;
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParadoxKind {
    Alabama,
    Population,
    NewState,
}

impl ParadoxKind {
    pub fn name(self) -> &'static str {
        match self {
            ParadoxKind::Alabama => "alabama",
            ParadoxKind::Population => "population",
            ParadoxKind::NewState => "new-state",
        }
    }
}

/// A re-verifiable witness: the method's allocations on `before` and
/// `after`, and the states that moved the wrong way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParadoxReport {
    pub kind: ParadoxKind,
    pub method: Method,
    pub before: Problem,
    pub after: Problem,
    pub before_seats: Vec<u64>,
    pub after_seats: Vec<u64>,
    pub states: Vec<usize>,
}

impl ParadoxReport {
    /// Re-runs the method on both instances and checks the recorded seats.
    pub fn verify(&self) -> bool {
        let rerun = |p: &Problem| self.method.apportion(p).map(|a| a.seats).ok();
        rerun(&self.before).as_ref() == Some(&self.before_seats)
            && rerun(&self.after).as_ref() == Some(&self.after_seats)
    }
}

/// Every `(r, r + 1, state)` in `seats` where the state's allocation drops.
/// Houses too small for the method are skipped.
pub fn detect_alabama(problem: &Problem, method: Method, seats: RangeInclusive<u64>) -> Result<Vec<ParadoxReport>> {
    if seats.is_empty() {
        return Err(Error::Input("empty house-size range".into()));
    }
    let mut reports = Vec::new();
    let mut prev = method.apportion(&problem.with_seats(*seats.start())).ok();
    for r in seats {
        let before = problem.with_seats(r);
        let after = problem.with_seats(r + 1);
        let next = method.apportion(&after).ok();
        if let (Some(a), Some(b)) = (&prev, &next) {
            for i in 0..problem.num_states() {
                if b.seats[i] < a.seats[i] {
                    reports.push(ParadoxReport {
                        kind: ParadoxKind::Alabama,
                        method,
                        before: before.clone(),
                        after: after.clone(),
                        before_seats: a.seats.clone(),
                        after_seats: b.seats.clone(),
                        states: vec![i],
                    });
                }
            }
        }
        prev = next;
    }
    Ok(reports)
}

/// Pairs `(i, j)` where `i` grew relatively faster than `j` (`π′ᵢ/πᵢ > π′ⱼ/πⱼ`)
/// yet `i` lost seats while `j` gained.
pub fn detect_population_paradox(before: &Problem, after: &Problem, method: Method) -> Result<Vec<ParadoxReport>> {
    if before.labels() != after.labels() || before.seats() != after.seats() {
        return Err(Error::Input(
            "population comparison needs the same states and house size".into(),
        ));
    }
    let (a, b) = match (method.apportion(before), method.apportion(after)) {
        (Ok(a), Ok(b)) => (a.seats, b.seats),
        _ => return Ok(Vec::new()),
    };
    let n = before.num_states();
    let mut reports = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && b[i] < a[i] && b[j] > a[j] && grew_faster(before, after, i, j) {
                reports.push(ParadoxReport {
                    kind: ParadoxKind::Population,
                    method,
                    before: before.clone(),
                    after: after.clone(),
                    before_seats: a.clone(),
                    after_seats: b.clone(),
                    states: vec![i, j],
                });
            }
        }
    }
    Ok(reports)
}

/// House size after adding the last state of `extended` to `base`: the new
/// state's quota at the base ratio of seats to heads, rounded half up.
pub fn extended_house_size(base: &Problem, new_population: u64) -> u64 {
    let quota = ratio(
        new_population as u128 * base.seats() as u128,
        base.total_population(),
    );
    let rounded = (quota + ratio(1, 2)).floor().to_integer();
    base.seats() + u64::try_from(rounded).expect("seat count fits in 64 bits")
}

/// Original states whose allocation changes when the last state of
/// `extended` joins `base` with its share of new seats.
pub fn detect_new_state_paradox(base: &Problem, extended: &Problem, method: Method) -> Result<Vec<ParadoxReport>> {
    let n = base.num_states();
    let well_formed = extended.num_states() == n + 1
        && extended.labels()[..n] == *base.labels()
        && extended.populations()[..n] == *base.populations()
        && extended.seats() == extended_house_size(base, extended.populations()[n]);
    if !well_formed {
        return Err(Error::Input(
            "extended problem must be the base plus one trailing state with its share of seats".into(),
        ));
    }
    let (a, b) = match (method.apportion(base), method.apportion(extended)) {
        (Ok(a), Ok(b)) => (a.seats, b.seats),
        _ => return Ok(Vec::new()),
    };
    let changed: Vec<usize> = (0..n).filter(|&i| a[i] != b[i]).collect();
    if changed.is_empty() {
        return Ok(Vec::new());
    }
    Ok(vec![ParadoxReport {
        kind: ParadoxKind::NewState,
        method,
        before: base.clone(),
        after: extended.clone(),
        before_seats: a,
        after_seats: b,
        states: changed,
    }])
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotaStayingSummary {
    pub problems: u64,
    /// Problems the method cannot apportion (house smaller than the state
    /// count for first-seat rules).
    pub skipped: u64,
    /// State-level events `αᵢ < ⌊qᵢ⌋`.
    pub lower_violations: u64,
    /// State-level events `αᵢ > ⌈qᵢ⌉`.
    pub upper_violations: u64,
}

pub fn quota_staying_check(method: Method, corpus: &[Problem]) -> Result<QuotaStayingSummary> {
    if corpus.is_empty() {
        return Err(Error::Input("empty corpus".into()));
    }
    let mut summary = QuotaStayingSummary::default();
    for problem in corpus {
        summary.problems += 1;
        let Ok(alloc) = method.apportion(problem) else {
            summary.skipped += 1;
            continue;
        };
        let quota = compute_quota(problem);
        for ((&a, &lo), hi) in alloc.seats.iter().zip(quota.floors()).zip(quota.ceilings()) {
            summary.lower_violations += u64::from(a < lo);
            summary.upper_violations += u64::from(a > hi);
        }
    }
    Ok(summary)
}

/// Seeded random problems with `1..=max_states` states, populations in
/// `1..=max_population` and houses in `0..=max_seats`.
pub fn random_corpus(seed: u64, count: usize, max_states: usize, max_population: u64, max_seats: u64) -> Vec<Problem> {
    let mut src = SeededSource::new(seed);
    (0..count)
        .map(|_| {
            let s = 1 + src.below(max_states as u64) as usize;
            let pops = (0..s).map(|_| 1 + src.below(max_population)).collect();
            let r = src.below(max_seats + 1);
            Problem::unlabeled(pops, r).expect("positive populations")
        })
        .collect()
}

/// Every population vector of length `states` with entries in
/// `1..=max_population`, in lexicographic order.
pub fn exhaustive_populations(states: usize, max_population: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (max_population as u128).pow(states as u32);
    (0..total).map(move |mut code| {
        let mut pops = vec![0; states];
        for slot in pops.iter_mut().rev() {
            *slot = 1 + (code % max_population as u128) as u64;
            code /= max_population as u128;
        }
        pops
    })
}

/// Seeded `(before, after)` pairs for the population paradox: every state's
/// population changes by a random factor, the house stays fixed.
pub fn population_pairs(seed: u64, count: usize, max_states: usize, max_population: u64, max_seats: u64) -> Vec<(Problem, Problem)> {
    let mut src = SeededSource::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = 2 + src.below(max_states.max(2) as u64 - 1) as usize;
        let before: Vec<u64> = (0..s).map(|_| 1 + src.below(max_population)).collect();
        let after: Vec<u64> = before
            .iter()
            .map(|&p| (p + src.below(p + 1)).max(1))
            .collect();
        let r = 1 + src.below(max_seats);
        out.push((
            Problem::unlabeled(before, r).expect("positive populations"),
            Problem::unlabeled(after, r).expect("positive populations"),
        ));
    }
    out
}

/// Seeded `(base, extended)` pairs for the new-state paradox.
pub fn new_state_pairs(seed: u64, count: usize, max_states: usize, max_population: u64, max_seats: u64) -> Vec<(Problem, Problem)> {
    let mut src = SeededSource::new(seed);
    (0..count)
        .map(|_| {
            let s = 1 + src.below(max_states as u64) as usize;
            let pops: Vec<u64> = (0..s).map(|_| 1 + src.below(max_population)).collect();
            let base = Problem::unlabeled(pops.clone(), 1 + src.below(max_seats)).expect("positive");
            let newcomer = 1 + src.below(max_population);
            let mut ext = pops;
            ext.push(newcomer);
            let r = extended_house_size(&base, newcomer);
            (base, Problem::unlabeled(ext, r).expect("positive"))
        })
        .collect()
}

/// `π′ᵢ/πᵢ > π′ⱼ/πⱼ`.
pub fn grew_faster(before: &Problem, after: &Problem, i: usize, j: usize) -> bool {
    let (p0, p1) = (before.populations(), after.populations());
    int(p1[i]) * int(p0[j]) > int(p1[j]) * int(p0[i])
}
