use apportion_core::divisor::{divisor_apportion, hamilton_apportion, lambda_allocation, DivisorAudit};
use apportion_core::problem::Audit;
use apportion_core::rational::{int, ratio, Rational};
use apportion_core::{compute_quota, satisfies_quota, DivisorRule, Problem};
use proptest::prelude::*;
use std::cmp::Ordering;

/// Priority of the `(b+1)`-th seat, `None` when infinite. Hill values are
/// squared.
fn priority(rule: DivisorRule, pop: u64, b: u64) -> Option<Rational> {
    let p = int(pop);
    match rule {
        DivisorRule::Adams => (b > 0).then(|| p / int(b)),
        DivisorRule::Dean => (b > 0).then(|| p * int(2 * b + 1) / int(2 * b * (b + 1))),
        DivisorRule::Hill => (b > 0).then(|| int(pop as u128 * pop as u128) / int(b * (b + 1))),
        DivisorRule::Webster => Some(p * int(2) / int(2 * b + 1)),
        DivisorRule::Jefferson => Some(p / int(b + 1)),
    }
}

/// The `r` largest priorities; ties by larger population, then index.
fn priority_list(p: &Problem, rule: DivisorRule) -> Vec<u64> {
    let r = p.seats();
    let mut entries = Vec::new();
    for (i, &pop) in p.populations().iter().enumerate() {
        for b in 0..r {
            entries.push((priority(rule, pop, b), pop, i));
        }
    }
    entries.sort_by(|x, y| {
        let key = match (&x.0, &y.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(a),
        };
        key.then(y.1.cmp(&x.1)).then(x.2.cmp(&y.2))
    });
    let mut seats = vec![0; p.num_states()];
    for e in entries.iter().take(r as usize) {
        seats[e.2] += 1;
    }
    seats
}

fn problems() -> impl Strategy<Value = Problem> {
    (prop::collection::vec(1u64..=200, 1..=6), 1u64..=30)
        .prop_filter_map("forced rules need r ≥ s", |(pops, r)| {
            (r as usize >= pops.len()).then(|| Problem::unlabeled(pops, r).unwrap())
        })
}

fn rules() -> impl Strategy<Value = DivisorRule> {
    prop::sample::select(DivisorRule::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn matches_priority_list(p in problems(), rule in rules()) {
        let a = divisor_apportion(&p, rule).unwrap();
        prop_assert_eq!(a.seats.iter().sum::<u64>(), p.seats());
        prop_assert_eq!(a.seats, priority_list(&p, rule));
    }

    #[test]
    fn scaling_invariant(p in problems(), rule in rules(), c in 2u64..50) {
        let scaled = p.with_populations(p.populations().iter().map(|x| x * c).collect()).unwrap();
        prop_assert_eq!(divisor_apportion(&p, rule).unwrap().seats, divisor_apportion(&scaled, rule).unwrap().seats);
    }

    #[test]
    fn lambda_monotone(p in problems(), rule in rules(), n in 1u64..500, d in 1u64..500, k in 1u64..10) {
        let small = lambda_allocation(&p, rule, &ratio(n, d)).unwrap();
        let large = lambda_allocation(&p, rule, &ratio(n * (k + 1), d * k)).unwrap();
        prop_assert!(small.iter().zip(&large).all(|(a, b)| a >= b));
    }

    #[test]
    fn lambda_replays(p in problems(), rule in rules()) {
        let a = divisor_apportion(&p, rule).unwrap();
        if let Some(Audit::Divisor(DivisorAudit { lambda: Some(t), squared, .. })) = &a.audit {
            if !squared {
                prop_assert_eq!(&lambda_allocation(&p, rule, t).unwrap(), &a.seats);
            }
        }
    }

    #[test]
    fn hamilton_within_quota(pops in prop::collection::vec(1u64..1_000_000, 1..30), r in 0u64..500) {
        let p = Problem::unlabeled(pops, r).unwrap();
        prop_assert!(satisfies_quota(&hamilton_apportion(&p).seats, &compute_quota(&p)).unwrap());
    }
}

#[test]
fn hill_squaring_agrees_with_floating_point() {
    use apportion_core::rng::SeededSource;
    let mut src = SeededSource::new(11);
    let mut checked = 0;
    while checked < 10_000 {
        let b = src.below(60);
        let x = ratio(1 + src.below(1_000_000), 1 + src.below(20_000));
        let xf = apportion_core::rational::to_f64(&x);
        let threshold = ((b * (b + 1)) as f64).sqrt();
        if (xf - threshold).abs() < 1e-9 * threshold.max(1.0) {
            continue;
        }
        assert_eq!(DivisorRule::Hill.exceeds(&x, b), xf > threshold, "x = {x}, b = {b}");
        checked += 1;
    }
}

#[test]
fn jefferson_upper_quota_witness() {
    let p = Problem::unlabeled(vec![1, 1, 4], 3).unwrap();
    let q = compute_quota(&p);
    let a = divisor_apportion(&p, DivisorRule::Jefferson).unwrap();
    assert_eq!(a.seats, vec![0, 0, 3]);
    assert_eq!(q.ceilings()[2], 2);
    assert!(!satisfies_quota(&a.seats, &q).unwrap());
}
