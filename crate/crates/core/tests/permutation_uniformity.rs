use apportion_core::rng::SeededSource;
use apportion_core::stochastic::random_permutation;
use std::collections::HashMap;

#[test]
fn four_element_permutations_are_uniform() {
    let n = 100_000u64;
    let mut src = SeededSource::new(2024);
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for _ in 0..n {
        *counts.entry(random_permutation(4, &mut src)).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 24);
    let expected = n as f64 / 24.0;
    let chi2: f64 = counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 23 degrees of freedom, upper 0.1% point.
    assert!(chi2 < 49.73, "chi-square {chi2}");
}

#[test]
fn child_streams_differ() {
    let a: Vec<u64> = (0..4).map(|k| SeededSource::child(1, k).next_u64()).collect();
    let mut b = a.clone();
    b.sort_unstable();
    b.dedup();
    assert_eq!(b.len(), 4);
    assert_eq!(SeededSource::child(1, 2).next_u64(), a[2]);
}
