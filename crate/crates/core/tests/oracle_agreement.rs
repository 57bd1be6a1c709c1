use apportion_core::montecarlo::{empirical_distribution, total_variation};
use apportion_core::stochastic::{apportion_quota, exact_distribution};
use apportion_core::{compute_quota, Problem};

#[test]
fn empirical_law_matches_enumeration() {
    let fixtures = [
        (vec![2, 3], 7),
        (vec![10, 21, 33, 7], 9),
        (vec![101, 57, 88, 23, 42, 19], 17),
        (vec![5, 6, 7, 8, 9, 10, 11, 12], 13),
    ];
    let n = 40_000;
    for (k, (pops, r)) in fixtures.into_iter().enumerate() {
        let p = Problem::unlabeled(pops, r).unwrap();
        let quota = compute_quota(&p);
        let law = exact_distribution(&p).unwrap();
        let counts = empirical_distribution(k as u64, n, |src| Ok(apportion_quota(&quota, src)?.0)).unwrap();
        assert!(counts.keys().all(|a| law.probability_of(a) > num_traits::Zero::zero()));
        let tv = total_variation(&counts, &law);
        let limit = 5.0 * (law.support().len() as f64 / n as f64).sqrt();
        assert!(tv <= limit, "fixture {k}: tv {tv} > {limit}");
    }
}
