//! Deterministic apportionment: the five divisor methods and largest
//! remainders, plus paradox detectors.
//!
//! A divisor method rounds each `λ`-quota `x = πᵢ/λ` down to `b = ⌊x⌋`
//! unless `x > δ(b)`, then tunes `λ` until the seats sum to `r`. Equality
//! `x = δ(b)` rounds down. Hill's `δ(b) = √(b(b+1))` is handled by comparing
//! `x² > b(b+1)` and searching over `λ²`, so every comparison is rational.

mod hamilton;
pub mod paradox;

pub use hamilton::hamilton_apportion;

use crate::error::{Error, Result};
use crate::problem::{Allocation, Audit, LowerBound, Problem};
use crate::rational::{self, int, ratio, Rational};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorRule {
    /// Smallest divisors, `δ(b) = b`.
    Adams,
    /// Harmonic means, `δ(b) = 2b(b+1)/(2b+1)`.
    Dean,
    /// Equal proportions, `δ(b) = √(b(b+1))`.
    Hill,
    /// Major fractions, `δ(b) = b + 1/2`.
    Webster,
    /// Greatest divisors, `δ(b) = b + 1`.
    Jefferson,
}

impl DivisorRule {
    /// Ordered by increasing `δ`.
    pub const ALL: [DivisorRule; 5] = [
        DivisorRule::Adams,
        DivisorRule::Dean,
        DivisorRule::Hill,
        DivisorRule::Webster,
        DivisorRule::Jefferson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DivisorRule::Adams => "adams",
            DivisorRule::Dean => "dean",
            DivisorRule::Hill => "hill",
            DivisorRule::Webster => "webster",
            DivisorRule::Jefferson => "jefferson",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        DivisorRule::ALL.into_iter().find(|r| r.name() == name)
    }

    /// `δ(0) = 0`: every state gets a seat for any finite `λ`.
    pub fn forces_first_seat(self) -> bool {
        matches!(self, DivisorRule::Adams | DivisorRule::Dean | DivisorRule::Hill)
    }

    fn is_squared(self) -> bool {
        self == DivisorRule::Hill
    }

    /// `δ(b)` when it is rational. Hill's value is rational only at `b = 0`.
    pub fn delta(self, b: u64) -> Option<Rational> {
        Some(match self {
            DivisorRule::Adams => int(b),
            DivisorRule::Dean => ratio(2 * b as u128 * (b as u128 + 1), 2 * b as u128 + 1),
            DivisorRule::Hill if b == 0 => int(0),
            DivisorRule::Hill => return None,
            DivisorRule::Webster => ratio(2 * b + 1, 2),
            DivisorRule::Jefferson => int(b + 1),
        })
    }

    /// `x > δ(b)`.
    pub fn exceeds(self, x: &Rational, b: u64) -> bool {
        match self.delta(b) {
            Some(d) => *x > d,
            None => x * x > int(b as u128 * (b as u128 + 1)),
        }
    }

    /// Threshold in search space (`λ`, or `λ²` for Hill) below which a state
    /// of population `pop` holds more than `c` seats.
    fn critical(self, pop: u64, c: u64) -> Option<Rational> {
        if self.is_squared() {
            (c > 0).then(|| ratio(pop as u128 * pop as u128, c as u128 * (c as u128 + 1)))
        } else {
            let d = self.delta(c)?;
            (!d.is_zero()).then(|| int(pop) / d)
        }
    }

    /// Seats of a state of population `pop` at search parameter `t`.
    fn seats_at(self, pop: u64, t: &Rational) -> u64 {
        if self.is_squared() {
            let y = int(pop as u128 * pop as u128) / t;
            let b = isqrt(&y.floor().to_integer());
            let bb = b as u128 * (b as u128 + 1);
            b + u64::from(y > int(bb))
        } else {
            let x = int(pop) / t;
            let b = rational::floor_u64(&x).expect("λ-quota fits in 64 bits");
            b + u64::from(self.exceeds(&x, b))
        }
    }
}

impl fmt::Display for DivisorRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn isqrt(n: &BigInt) -> u64 {
    n.sqrt().to_u64().expect("seat count fits in 64 bits")
}

/// `αᵢ(λ)` for every state.
pub fn lambda_allocation(problem: &Problem, rule: DivisorRule, lambda: &Rational) -> Result<Vec<u64>> {
    if *lambda <= Rational::zero() {
        return Err(Error::Input("λ must be positive".into()));
    }
    let t = if rule.is_squared() { lambda * lambda } else { lambda.clone() };
    Ok(allocation_at(problem, rule, &t))
}

fn allocation_at(problem: &Problem, rule: DivisorRule, t: &Rational) -> Vec<u64> {
    problem
        .populations()
        .iter()
        .map(|&p| rule.seats_at(p, t))
        .collect()
}

/// How a divisor allocation was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorAudit {
    /// A divisor with `Σ αᵢ(λ̄) = r`, or `None` when a tie at a critical
    /// divisor made the sum jump over `r`.
    #[serde(with = "optional_rational")]
    pub lambda: Option<Rational>,
    /// `lambda` holds `λ̄²` (Hill).
    pub squared: bool,
    /// Seats assigned by the tie rule (descending population, then index).
    pub tied_seats: u64,
}

mod optional_rational {
    use crate::rational::{format_exact, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&format_exact(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(D::Error::custom))
            .transpose()
    }
}

/// Tunes `λ` over the finite set of critical divisors.
///
/// Starting from `λ₀ = Π/r`, where every state sits at its lower or upper
/// quota, the sum is off by at most `s`, so only thresholds within `s`
/// seats of each state's starting allocation can matter. Those are probed
/// in decreasing order together with the midpoints between them.
pub fn divisor_apportion(problem: &Problem, rule: DivisorRule) -> Result<Allocation> {
    let s = problem.num_states() as u64;
    let r = problem.seats();
    let name = rule.name();
    if r == 0 {
        return Ok(Allocation::new(vec![0; s as usize], name));
    }
    if rule.forces_first_seat() && r < s {
        return Err(Error::Infeasible(format!(
            "{name} gives every state a seat, but there are {s} states and {r} seats"
        )));
    }
    let mut t0 = ratio(BigInt::from(problem.total_population()), BigInt::from(r));
    if rule.is_squared() {
        t0 = &t0 * &t0;
    }
    let start = allocation_at(problem, rule, &t0);
    let mut candidates = vec![t0];
    for (&pop, &a) in problem.populations().iter().zip(&start) {
        for c in a.saturating_sub(s)..=a + s {
            candidates.extend(rule.critical(pop, c));
        }
    }
    candidates.sort_unstable_by(|a, b| b.cmp(a));
    candidates.dedup();
    let two = int(2);
    let mut probes = Vec::with_capacity(2 * candidates.len() + 1);
    probes.push(&candidates[0] * &two);
    for (k, v) in candidates.iter().enumerate() {
        probes.push(v.clone());
        match candidates.get(k + 1) {
            Some(next) => probes.push((v + next) / &two),
            None => probes.push(v / &two),
        }
    }
    let total = |t: &Rational| -> u64 { allocation_at(problem, rule, t).iter().sum() };
    // First probe whose total reaches r; totals rise along `probes`.
    let k = probes.partition_point(|t| total(t) < r);
    if k == probes.len() || (k == 0 && total(&probes[0]) != r) {
        return Err(Error::Logic(format!("{name}: λ search left the candidate range")));
    }
    let seats = allocation_at(problem, rule, &probes[k]);
    let (seats, audit) = if seats.iter().sum::<u64>() == r {
        (
            seats,
            DivisorAudit {
                lambda: Some(probes[k].clone()),
                squared: rule.is_squared(),
                tied_seats: 0,
            },
        )
    } else {
        let mut base = allocation_at(problem, rule, &probes[k - 1]);
        let need = r - base.iter().sum::<u64>();
        let mut gainers: Vec<usize> = (0..base.len()).filter(|&i| seats[i] > base[i]).collect();
        gainers.sort_by(|&i, &j| {
            problem.populations()[j]
                .cmp(&problem.populations()[i])
                .then(i.cmp(&j))
        });
        for &i in gainers.iter().take(need as usize) {
            base[i] += 1;
        }
        (
            base,
            DivisorAudit {
                lambda: None,
                squared: rule.is_squared(),
                tied_seats: need,
            },
        )
    };
    Ok(Allocation {
        seats,
        method: name.into(),
        seed: None,
        audit: Some(Audit::Divisor(audit)),
    })
}

/// Divisor method with per-state minimums: state `i` starts at `lᵢ` seats
/// (at least one under rules with `δ(0) = 0`) and the remaining seats go by
/// the rule's priority list `πᵢ/δ(b)`. With `rule = Hill` and `l = 1` this
/// is the usual one-seat-each-then-equal-proportions reading.
pub fn divisor_with_lower_bound(problem: &Problem, rule: DivisorRule, bound: &LowerBound) -> Result<Allocation> {
    let s = problem.num_states();
    if bound.0.len() != s {
        return Err(Error::LengthMismatch {
            expected: s,
            found: bound.0.len(),
        });
    }
    let mut seats: Vec<u64> = bound
        .0
        .iter()
        .map(|&l| if rule.forces_first_seat() { l.max(1) } else { l })
        .collect();
    let fixed: u64 = seats.iter().sum();
    let r = problem.seats();
    if fixed > r {
        return Err(Error::Infeasible(format!(
            "minimum seats total {fixed}, but the house has {r}"
        )));
    }
    let pops = problem.populations();
    // `None` is an infinite priority (`δ(b) = 0`).
    let priority = |i: usize, b: u64| -> Option<Rational> {
        if rule.is_squared() {
            (b > 0).then(|| ratio(pops[i] as u128 * pops[i] as u128, b as u128 * (b as u128 + 1)))
        } else {
            let d = rule.delta(b).expect("rational δ");
            (!d.is_zero()).then(|| int(pops[i]) / d)
        }
    };
    let mut keys: Vec<Option<Rational>> = (0..s).map(|i| priority(i, seats[i])).collect();
    for _ in fixed..r {
        let best = (0..s)
            .max_by(|&i, &j| {
                let by_key = match (&keys[i], &keys[j]) {
                    (None, None) => std::cmp::Ordering::Equal,
                    (None, Some(_)) => std::cmp::Ordering::Greater,
                    (Some(_), None) => std::cmp::Ordering::Less,
                    (Some(a), Some(b)) => a.cmp(b),
                };
                by_key.then(pops[i].cmp(&pops[j])).then(j.cmp(&i))
            })
            .expect("at least one state");
        seats[best] += 1;
        keys[best] = priority(best, seats[best]);
    }
    Ok(Allocation::new(seats, rule.name()))
}

/// A deterministic apportionment method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Hamilton,
    Divisor(DivisorRule),
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Hamilton,
        Method::Divisor(DivisorRule::Adams),
        Method::Divisor(DivisorRule::Dean),
        Method::Divisor(DivisorRule::Hill),
        Method::Divisor(DivisorRule::Webster),
        Method::Divisor(DivisorRule::Jefferson),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Hamilton => "hamilton",
            Method::Divisor(rule) => rule.name(),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        if name == "hamilton" {
            return Some(Method::Hamilton);
        }
        DivisorRule::from_name(name).map(Method::Divisor)
    }

    pub fn apportion(self, problem: &Problem) -> Result<Allocation> {
        match self {
            Method::Hamilton => Ok(hamilton_apportion(problem)),
            Method::Divisor(rule) => divisor_apportion(problem, rule),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
