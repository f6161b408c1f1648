mod common;

use common::{all_permutations, naive_matrix_copies, perm};
use hyperavoid::contraction::{contract2, contract_b, ContractionFactor};
use hyperavoid::matrix::{count_matrix_copies, densities, matrix_contains, permutation_matrix, sampling_estimates};
use hyperavoid::perm::count_occurrences;
use hyperavoid::BinaryMatrix;
use proptest::prelude::*;

#[test]
fn permutation_matrix_copies_equal_pattern_occurrences() {
    let patterns: Vec<_> = (1..=4).flat_map(all_permutations).collect();
    for n in 0..=6 {
        for sigma in all_permutations(n) {
            let m = permutation_matrix(&sigma);
            for pi in &patterns {
                assert_eq!(count_matrix_copies(&m, pi), count_occurrences(&sigma, pi), "{sigma} / {pi}");
            }
        }
    }
}

#[test]
fn copies_match_column_subset_oracle_on_all_3x3() {
    let patterns: Vec<_> = (1..=3).flat_map(all_permutations).collect();
    for mask in 0..1u64 << 9 {
        let m = BinaryMatrix::from_mask(3, mask);
        for pi in &patterns {
            assert_eq!(count_matrix_copies(&m, pi), naive_matrix_copies(&m, pi));
        }
    }
}

#[test]
fn sampling_means_track_exact_densities() {
    let m = permutation_matrix(&perm("2,4,1,3"));
    let pi = perm("1,2");
    let est = sampling_estimates(&m, &pi, 3, 20_000, 11).unwrap();
    let exact = densities(&m, &pi);
    let one = hyperavoid::rational::to_f64(&exact.one_density);
    let pd = hyperavoid::rational::to_f64(&exact.pi_density);
    assert!((hyperavoid::rational::to_f64(&est.mean_one) - one).abs() <= 4.0 * est.se_one);
    assert!((hyperavoid::rational::to_f64(&est.mean_pi) - pd).abs() <= 4.0 * est.se_pi);
}

fn arb_matrix(max: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::bool::ANY, r * c).prop_map(move |bits| {
            let mut m = BinaryMatrix::zeros(r, c);
            for (idx, b) in bits.into_iter().enumerate() {
                m.set(idx / c, idx % c, b);
            }
            m
        })
    })
}

fn arb_pattern() -> impl Strategy<Value = hyperavoid::Permutation> {
    (1usize..=3)
        .prop_flat_map(|k| Just((0..k as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| hyperavoid::Permutation::from_zero_based(v).unwrap())
}

proptest! {
    #[test]
    fn copies_agree_with_oracle(m in arb_matrix(5), pi in arb_pattern()) {
        prop_assert_eq!(count_matrix_copies(&m, &pi), naive_matrix_copies(&m, &pi));
        prop_assert_eq!(matrix_contains(&m, &permutation_matrix(&pi)).unwrap(), naive_matrix_copies(&m, &pi) > 0);
    }

    #[test]
    fn setting_a_one_never_loses_copies(m in arb_matrix(6), pi in arb_pattern(), i in 0usize..6, j in 0usize..6) {
        let (i, j) = (i % m.rows(), j % m.cols());
        let mut bigger = m.clone();
        bigger.set(i, j, true);
        prop_assert!(count_matrix_copies(&bigger, &pi) >= count_matrix_copies(&m, &pi));
    }

    #[test]
    fn contractions_never_add_copies(mask in any::<u64>(), pi in arb_pattern()) {
        let m = BinaryMatrix::from_mask(8, mask);
        let before = count_matrix_copies(&m, &pi);
        prop_assert!(count_matrix_copies(&contract2(&m).unwrap(), &pi) <= before);
        let b = ContractionFactor::new(3, 2).unwrap();
        prop_assert!(count_matrix_copies(&contract_b(&m, b), &pi) <= before);
    }

    #[test]
    fn text_and_json_round_trip(m in arb_matrix(7)) {
        prop_assert_eq!(m.to_string().parse::<BinaryMatrix>().unwrap(), m.clone());
        let json = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<BinaryMatrix>(&json).unwrap(), m);
    }
}
