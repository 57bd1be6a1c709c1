//! The fair randomized scheme and its exact distribution.
//!
//! Step I relabels the states by a uniform random permutation, step II gives
//! every state the floor of its quota, and step III lays the fractional
//! quotas end to end on the line starting at a uniform `U`; state `i` gets
//! one more seat iff its interval `[Q_{i-1}, Q_i)` contains an integer.
//! `Q_i` is the cumulative sum `U + Σ_{j≤i} q′_j`.
//!
//! `U` is drawn on the lattice `k / 2^53` so every membership test is exact.
//! Sampling runs on integer numerators over a common denominator; the
//! rational route in [`systematic_round`] is kept as the reference.

use crate::error::{Error, Result};
use crate::problem::{compute_quota, Allocation, Audit, Problem, QuotaVector};
use crate::rational::{self, int, ratio, Rational};
use crate::rng::{SeededSource, UNIFORM_BITS};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default cap on the number of states with a non-zero fractional quota
/// that [`exact_distribution`] will enumerate orderings for.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 8;

/// Default attempt cap for rejection samplers.
pub const DEFAULT_RETRY_CAP: u64 = 1_000_000;

/// The randomness consumed by one run of the scheme, enough to replay it.
/// `permutation[pos]` is the original index of the state placed at `pos`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystematicAudit {
    pub permutation: Vec<usize>,
    /// `U = u_numerator / 2^53`.
    pub u_numerator: u64,
}

impl SystematicAudit {
    pub fn u(&self) -> Rational {
        ratio(self.u_numerator, 1u64 << UNIFORM_BITS)
    }
}

/// The sampled `U` with the partial sums `Q_0 = U, ..., Q_s = U + r′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystematicDraw {
    pub u: Rational,
    pub cumulative: Vec<Rational>,
}

impl SystematicDraw {
    pub fn new(fractional: &[Rational], u: Rational) -> SystematicDraw {
        let mut cumulative = Vec::with_capacity(fractional.len() + 1);
        cumulative.push(u.clone());
        let mut acc = u.clone();
        for f in fractional {
            acc += f;
            cumulative.push(acc.clone());
        }
        SystematicDraw { u, cumulative }
    }

    /// Indicator of `[Q_{i-1}, Q_i)` containing an integer, i.e.
    /// `⌈Q_i⌉ − ⌈Q_{i-1}⌉` (the fractional parts are below one).
    pub fn indicators(&self) -> Vec<u8> {
        self.cumulative
            .windows(2)
            .map(|w| {
                let hits = w[1].ceil().to_integer() - w[0].ceil().to_integer();
                hits.to_u8().expect("fractional quotas are below one")
            })
            .collect()
    }
}

/// Uniform random permutation of `0..n` by Fisher-Yates.
pub fn random_permutation(n: usize, src: &mut SeededSource) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = src.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}

fn check_fractional(fractional: &[Rational]) -> Result<Rational> {
    if let Some(f) = fractional
        .iter()
        .find(|f| *f < &Rational::zero() || *f >= &Rational::one())
    {
        return Err(Error::Input(format!(
            "fractional quota {} outside [0, 1)",
            rational::format_exact(f)
        )));
    }
    let total = rational::sum(fractional);
    if !rational::is_integral(&total) {
        return Err(Error::Input(format!(
            "fractional quotas sum to {}, not an integer",
            rational::format_exact(&total)
        )));
    }
    Ok(total)
}

/// Step III for an explicit `u ∈ [0, 1)`, in exact rational arithmetic.
pub fn systematic_round(fractional: &[Rational], u: &Rational) -> Result<Vec<u8>> {
    check_fractional(fractional)?;
    if u < &Rational::zero() || u >= &Rational::one() {
        return Err(Error::Input(format!(
            "u = {} outside [0, 1)",
            rational::format_exact(u)
        )));
    }
    Ok(SystematicDraw::new(fractional, u.clone()).indicators())
}

/// Fractional quotas as integer numerators over one common denominator.
#[derive(Clone, Debug)]
pub struct ResidualLattice {
    denom: u128,
    nums: Vec<u128>,
}

impl ResidualLattice {
    pub fn new(fractional: &[Rational]) -> Result<Self> {
        check_fractional(fractional)?;
        let denom = fractional
            .iter()
            .fold(BigInt::one(), |acc, f| acc.lcm(f.denom()));
        // Q numerators reach (s + 1) · D · 2^53 in `indicators_at`.
        let limit = BigInt::from(u128::MAX) / BigInt::from((fractional.len() as u128 + 1) << UNIFORM_BITS);
        if denom > limit {
            return Err(Error::Overflow(format!("common denominator {denom}")));
        }
        let nums = fractional
            .iter()
            .map(|f| {
                (f.numer() * (&denom / f.denom()))
                    .to_u128()
                    .expect("numerator below denominator")
            })
            .collect();
        Ok(ResidualLattice {
            denom: denom.to_u128().expect("checked above"),
            nums,
        })
    }

    pub fn denominator(&self) -> u128 {
        self.denom
    }

    pub fn numerators(&self) -> &[u128] {
        &self.nums
    }

    /// Step III with `U = k / 2^53`, visiting states in `order`. The result
    /// is indexed by original state index.
    pub fn indicators_at(&self, order: &[usize], k: u64) -> Vec<u8> {
        let scale = 1u128 << UNIFORM_BITS;
        let modulus = self.denom * scale;
        let base = k as u128 * self.denom;
        let mut out = vec![0u8; self.nums.len()];
        let mut acc = 0u128;
        let mut prev_ceil = base.div_ceil(modulus);
        for &i in order {
            acc += self.nums[i];
            let ceil = (base + acc * scale).div_ceil(modulus);
            out[i] = (ceil - prev_ceil) as u8;
            prev_ceil = ceil;
        }
        out
    }
}

/// Runs steps I-III on an explicit quota vector.
pub fn apportion_quota(quota: &QuotaVector, src: &mut SeededSource) -> Result<(Vec<u64>, SystematicAudit)> {
    let permutation = random_permutation(quota.len(), src);
    let u_numerator = src.uniform_numerator();
    let seats = draw_seats(quota, &permutation, u_numerator)?;
    Ok((
        seats,
        SystematicAudit {
            permutation,
            u_numerator,
        },
    ))
}

fn draw_seats(quota: &QuotaVector, order: &[usize], k: u64) -> Result<Vec<u64>> {
    let extra = match ResidualLattice::new(quota.fractional()) {
        Ok(lattice) => lattice.indicators_at(order, k),
        Err(Error::Overflow(_)) => {
            // Denominators too wide for u128: fall back to rationals.
            let permuted: Vec<Rational> = order.iter().map(|&i| quota.fractional()[i].clone()).collect();
            let hits = SystematicDraw::new(&permuted, ratio(k, 1u64 << UNIFORM_BITS)).indicators();
            let mut extra = vec![0u8; order.len()];
            for (pos, &i) in order.iter().enumerate() {
                extra[i] = hits[pos];
            }
            extra
        }
        Err(e) => return Err(e),
    };
    Ok(extra
        .iter()
        .zip(quota.floors())
        .map(|(&e, &floor)| floor + e as u64)
        .collect())
}

/// Re-applies a recorded `(permutation, U)` pair to a quota vector.
pub fn replay(quota: &QuotaVector, audit: &SystematicAudit) -> Result<Vec<u64>> {
    let mut sorted = audit.permutation.clone();
    sorted.sort_unstable();
    if sorted != (0..quota.len()).collect::<Vec<_>>() {
        return Err(Error::Input("audit permutation does not match the state count".into()));
    }
    if audit.u_numerator >= 1 << UNIFORM_BITS {
        return Err(Error::Input("audit u numerator exceeds 2^53".into()));
    }
    draw_seats(quota, &audit.permutation, audit.u_numerator)
}

pub fn stochastic_apportion(problem: &Problem, src: &mut SeededSource) -> Allocation {
    let quota = compute_quota(problem);
    let (seats, audit) =
        apportion_quota(&quota, src).expect("quotas of a problem have valid fractional parts");
    Allocation {
        seats,
        method: "stochastic".into(),
        seed: Some(src.seed()),
        audit: Some(Audit::Systematic(audit)),
    }
}

/// Exact law of a random allocation: support points with their probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocationDistribution {
    support: Vec<(Vec<u64>, Rational)>,
}

impl AllocationDistribution {
    pub fn from_weights(weights: BTreeMap<Vec<u64>, Rational>) -> Self {
        AllocationDistribution {
            support: weights.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        }
    }

    pub fn point_mass(seats: Vec<u64>) -> Self {
        AllocationDistribution {
            support: vec![(seats, Rational::one())],
        }
    }

    pub fn support(&self) -> &[(Vec<u64>, Rational)] {
        &self.support
    }

    pub fn num_states(&self) -> usize {
        self.support.first().map_or(0, |(a, _)| a.len())
    }

    pub fn probability_of(&self, seats: &[u64]) -> Rational {
        self.support
            .iter()
            .find(|(a, _)| a == seats)
            .map_or_else(Rational::zero, |(_, p)| p.clone())
    }

    pub fn total_probability(&self) -> Rational {
        rational::sum(self.support.iter().map(|(_, p)| p))
    }

    /// Law of the seat count of state `i`.
    pub fn marginal(&self, i: usize) -> BTreeMap<u64, Rational> {
        let mut out: BTreeMap<u64, Rational> = BTreeMap::new();
        for (a, p) in &self.support {
            *out.entry(a[i]).or_insert_with(Rational::zero) += p;
        }
        out
    }

    pub fn expectation(&self, i: usize) -> Rational {
        self.support
            .iter()
            .fold(Rational::zero(), |acc, (a, p)| acc + int(a[i]) * p)
    }

    pub fn expectations(&self) -> Vec<Rational> {
        (0..self.num_states()).map(|i| self.expectation(i)).collect()
    }

    /// Probability of `keep` and the law conditioned on it. `None` when the
    /// event has probability zero.
    pub fn condition<F>(&self, keep: F) -> Option<(Rational, AllocationDistribution)>
    where
        F: Fn(&[u64]) -> bool,
    {
        let kept: Vec<_> = self.support.iter().filter(|(a, _)| keep(a)).cloned().collect();
        let mass = rational::sum(kept.iter().map(|(_, p)| p));
        if mass.is_zero() {
            return None;
        }
        let support = kept.into_iter().map(|(a, p)| (a, p / &mass)).collect();
        Some((mass, AllocationDistribution { support }))
    }
}

pub fn exact_distribution(problem: &Problem) -> Result<AllocationDistribution> {
    exact_distribution_of(&compute_quota(problem), DEFAULT_ENUMERATION_LIMIT)
}

/// Exact law of [`apportion_quota`] with `U` continuous on `[0, 1)`.
///
/// States with a zero fractional quota never receive a residual seat, so
/// only the relative order of the `s′` unsatisfied states matters; each of
/// the `s′!` orders is equally likely. For a fixed order the allocation is
/// constant between the breakpoints `(−C_t) mod 1`, where `C_t` are the
/// partial sums of the fractional quotas. `limit` caps `s′`.
pub fn exact_distribution_of(quota: &QuotaVector, limit: usize) -> Result<AllocationDistribution> {
    let unsatisfied: Vec<usize> = (0..quota.len())
        .filter(|&i| !quota.fractional()[i].is_zero())
        .collect();
    if unsatisfied.len() > limit {
        return Err(Error::Capacity {
            states: unsatisfied.len(),
            limit,
        });
    }
    if unsatisfied.is_empty() {
        return Ok(AllocationDistribution::point_mass(quota.floors().to_vec()));
    }
    let lattice = ResidualLattice::new(quota.fractional())?;
    let mut weights: BTreeMap<u64, u128> = BTreeMap::new();
    let mut orders = 0u128;
    let mut items = unsatisfied.clone();
    for_each_permutation(&mut items, &mut |order| {
        orders += 1;
        accumulate_order(&lattice, order, &mut weights);
    });
    Ok(from_mask_weights(quota, &weights, lattice.denom * orders))
}

/// Exact law for one fixed visiting order (step I skipped).
pub fn fixed_order_distribution(quota: &QuotaVector, order: &[usize]) -> Result<AllocationDistribution> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..quota.len()).collect::<Vec<_>>() {
        return Err(Error::Input("order is not a permutation of the states".into()));
    }
    if quota.len() > 64 {
        return Err(Error::Capacity {
            states: quota.len(),
            limit: 64,
        });
    }
    let lattice = ResidualLattice::new(quota.fractional())?;
    let mut weights = BTreeMap::new();
    accumulate_order(&lattice, order, &mut weights);
    Ok(from_mask_weights(quota, &weights, lattice.denom))
}

fn accumulate_order(lattice: &ResidualLattice, order: &[usize], weights: &mut BTreeMap<u64, u128>) {
    let d = lattice.denom;
    let mut cumulative = Vec::with_capacity(order.len() + 1);
    cumulative.push(0u128);
    let mut acc = 0u128;
    for &i in order {
        acc += lattice.nums[i];
        cumulative.push(acc);
    }
    let mut points: Vec<u128> = cumulative.iter().map(|&c| (d - c % d) % d).collect();
    points.push(0);
    points.sort_unstable();
    points.dedup();
    points.push(d);
    for piece in points.windows(2) {
        let (a, b) = (piece[0], piece[1]);
        // On the open piece (a, b) the ceiling of `U + C` is `⌊(a + C)/D⌋ + 1`.
        let mut mask = 0u64;
        for (pos, &i) in order.iter().enumerate() {
            let hit = (a + cumulative[pos + 1]) / d - (a + cumulative[pos]) / d;
            if hit == 1 {
                mask |= 1 << i;
            }
        }
        *weights.entry(mask).or_insert(0) += b - a;
    }
}

fn from_mask_weights(quota: &QuotaVector, weights: &BTreeMap<u64, u128>, total: u128) -> AllocationDistribution {
    let mut law = BTreeMap::new();
    for (&mask, &w) in weights {
        let seats: Vec<u64> = quota
            .floors()
            .iter()
            .enumerate()
            .map(|(i, &f)| f + (mask >> i & 1))
            .collect();
        law.insert(seats, ratio(BigInt::from(w), BigInt::from(total)));
    }
    AllocationDistribution::from_weights(law)
}

/// Calls `f` once for every ordering of `items` (Heap's algorithm).
pub(crate) fn for_each_permutation<F: FnMut(&[usize])>(items: &mut [usize], f: &mut F) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// The unfair alternative to step III: draw `r′` indices independently with
/// `P(I = i) ∝ q′_i` and resample the whole tuple until they are distinct.
pub fn conditional_sampling_allocate(
    fractional: &[Rational],
    residual: u64,
    src: &mut SeededSource,
    cap: u64,
) -> Result<Vec<u8>> {
    let lattice = weight_lattice(fractional)?;
    let positive = lattice.nums.iter().filter(|&&n| n > 0).count() as u64;
    if residual > positive {
        return Err(Error::Input(format!(
            "{residual} seats cannot go to {positive} distinct unsatisfied states"
        )));
    }
    let mut out = vec![0u8; fractional.len()];
    if residual == 0 {
        return Ok(out);
    }
    let total: u128 = lattice.nums.iter().sum();
    let mut picked = Vec::with_capacity(residual as usize);
    for _ in 0..cap {
        picked.clear();
        let mut collided = false;
        for _ in 0..residual {
            let mut w = src.below_u128(total);
            let mut index = 0;
            while w >= lattice.nums[index] {
                w -= lattice.nums[index];
                index += 1;
            }
            if picked.contains(&index) {
                collided = true;
                break;
            }
            picked.push(index);
        }
        if !collided {
            for &i in &picked {
                out[i] = 1;
            }
            return Ok(out);
        }
    }
    Err(Error::Convergence { attempts: cap })
}

/// Common-denominator weights without requiring an integral total.
fn weight_lattice(fractional: &[Rational]) -> Result<ResidualLattice> {
    if fractional
        .iter()
        .any(|f| f < &Rational::zero() || f >= &Rational::one())
    {
        return Err(Error::Input("fractional quotas must lie in [0, 1)".into()));
    }
    let denom = fractional
        .iter()
        .fold(BigInt::one(), |acc, f| acc.lcm(f.denom()));
    let denom_u = denom
        .to_u128()
        .filter(|d| d.checked_mul(fractional.len() as u128).is_some())
        .ok_or_else(|| Error::Overflow(format!("common denominator {denom}")))?;
    let nums = fractional
        .iter()
        .map(|f| (f.numer() * (&denom / f.denom())).to_u128().expect("below denominator"))
        .collect();
    Ok(ResidualLattice { denom: denom_u, nums })
}

/// Exact selection probabilities of [`conditional_sampling_allocate`]:
/// `P(i selected) = Σ_{S ∋ i} Π_{j∈S} q′_j / Σ_S Π_{j∈S} q′_j` over
/// `r′`-subsets `S` of the unsatisfied states.
pub fn conditional_sampling_law(fractional: &[Rational], residual: u64) -> Result<Vec<Rational>> {
    let positive: Vec<usize> = (0..fractional.len())
        .filter(|&i| !fractional[i].is_zero())
        .collect();
    let k = residual as usize;
    if k > positive.len() {
        return Err(Error::Input("more seats than unsatisfied states".into()));
    }
    if positive.len() > 24 {
        return Err(Error::Capacity {
            states: positive.len(),
            limit: 24,
        });
    }
    let mut hits = vec![Rational::zero(); fractional.len()];
    if k == 0 {
        return Ok(hits);
    }
    let mut total = Rational::zero();
    for mask in 0u32..(1 << positive.len()) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let members: Vec<usize> = (0..positive.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| positive[b])
            .collect();
        let weight = members
            .iter()
            .fold(Rational::one(), |acc, &i| acc * &fractional[i]);
        for &i in &members {
            hits[i] += &weight;
        }
        total += weight;
    }
    Ok(hits.into_iter().map(|h| h / &total).collect())
}
