use apportion_core::montecarlo::{
    fairness_test, monotonicity_scan, random_monotonicity_corpus, simulate, stochastic_dominance, Marginal,
    MonotonicityKind, MonotonicityPair, SimMethod, DEFAULT_Z,
};
use apportion_core::rational::{int, ratio, Rational};
use apportion_core::{compute_quota, Problem};
use proptest::prelude::*;

#[test]
fn two_state_means() {
    let p = Problem::unlabeled(vec![2, 3], 7).unwrap();
    let report = simulate(&SimMethod::Stochastic, &p, 99, 100_000).unwrap();
    assert_eq!(report.quota_violations, 0);
    assert!(fairness_test(&report, &[ratio(14, 5), ratio(21, 5)], DEFAULT_Z).unwrap().iter().all(|&v| v));
}

#[test]
fn report_ignores_thread_count() {
    let p = Problem::unlabeled(vec![13, 27, 8, 52, 31], 11).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulate(&SimMethod::Stochastic, &p, 5, 20_000).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn fair_methods_pass() {
    let p = Problem::unlabeled(vec![101, 57, 88, 23, 42, 19], 17).unwrap();
    let q = compute_quota(&p);
    let report = simulate(&SimMethod::Stochastic, &p, 1, 100_000).unwrap();
    assert!(fairness_test(&report, q.quotas(), DEFAULT_Z).unwrap().iter().all(|&v| v));
}

#[test]
fn deterministic_pairs_compare_as_integers() {
    // Integral quotas: r′ = 0 on both sides.
    let pairs = vec![MonotonicityPair::PopulationMove {
        before: Problem::unlabeled(vec![4, 6], 5).unwrap(),
        from: 1,
        to: 0,
        heads: 2,
    }];
    let report = monotonicity_scan(&pairs).unwrap();
    assert_eq!(report.failed, 0);
}

#[test]
fn small_monotonicity_corpus() {
    for kind in [MonotonicityKind::PopulationMove, MonotonicityKind::HouseIncrease] {
        let corpus = random_monotonicity_corpus(17, 30, kind, 4, 40, 12);
        let report = monotonicity_scan(&corpus).unwrap();
        assert_eq!(report.failed, 0, "{:?}", report.failures().collect::<Vec<_>>());
    }
}

fn marginals() -> impl Strategy<Value = Marginal> {
    prop::collection::btree_map(0u64..6, 1u64..10, 1..4).prop_map(|w| {
        let total: u64 = w.values().sum();
        w.into_iter().map(|(k, v)| (k, ratio(v, total))).collect()
    })
}

fn same_law(a: &Marginal, b: &Marginal) -> bool {
    let zero = int(0);
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
    keys.into_iter().all(|k| a.get(k).unwrap_or(&zero) == b.get(k).unwrap_or(&zero))
}

proptest! {
    #[test]
    fn dominance_reflexive(a in marginals()) {
        prop_assert!(stochastic_dominance(&a, &a));
    }

    #[test]
    fn dominance_antisymmetric(a in marginals(), b in marginals()) {
        if stochastic_dominance(&a, &b) && stochastic_dominance(&b, &a) {
            prop_assert!(same_law(&a, &b));
        }
    }

    #[test]
    fn dominance_transitive(a in marginals(), b in marginals(), c in marginals()) {
        if stochastic_dominance(&a, &b) && stochastic_dominance(&b, &c) {
            prop_assert!(stochastic_dominance(&a, &c));
        }
    }

    #[test]
    fn shifting_up_dominates(a in marginals(), k in 1u64..3) {
        let shifted: Marginal = a.iter().map(|(x, p)| (x + k, p.clone())).collect::<std::collections::BTreeMap<u64, Rational>>();
        prop_assert!(stochastic_dominance(&a, &shifted));
        prop_assert!(!stochastic_dominance(&shifted, &a));
    }
}
