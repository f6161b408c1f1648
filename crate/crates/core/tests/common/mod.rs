//! Brute-force oracles shared by the integration tests. They deliberately
//! avoid the library's matching and counting routines.

#![allow(dead_code)]

use hyperavoid::combin::Combinations;
use hyperavoid::{BinaryMatrix, KUniformHypergraph, Permutation};

/// Relative order of a value sequence, as 0-based ranks.
pub fn standardize(values: &[u32]) -> Vec<u32> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    values.iter().map(|v| sorted.binary_search(v).unwrap() as u32).collect()
}

/// Every k-subset of positions whose standardization equals π.
pub fn naive_occurrences(sigma: &Permutation, pi: &Permutation) -> Vec<Vec<usize>> {
    Combinations::new(sigma.len(), pi.len())
        .filter(|idx| {
            let vals: Vec<u32> = idx.iter().map(|&i| sigma.values()[i]).collect();
            standardize(&vals) == pi.values()
        })
        .collect()
}

pub fn naive_count(sigma: &Permutation, pi: &Permutation) -> u64 {
    naive_occurrences(sigma, pi).len() as u64
}

pub fn naive_lambda_avoids(sigma: &Permutation, pi: &Permutation, lambda: &KUniformHypergraph) -> bool {
    naive_occurrences(sigma, pi).iter().all(|idx| !lambda.contains_edge(idx))
}

/// Heap's algorithm, independent of the library's lexicographic stream.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn heap(k: usize, a: &mut Vec<u32>, out: &mut Vec<Permutation>) {
        if k <= 1 {
            out.push(Permutation::from_zero_based(a.clone()).unwrap());
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        heap(k - 1, a, out);
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n as u32).collect(), &mut out);
    out
}

/// Column-subset enumeration of copies of A_π.
pub fn naive_matrix_copies(a: &BinaryMatrix, pi: &Permutation) -> u64 {
    let k = pi.len();
    let mut count = 0;
    for rows in Combinations::new(a.rows(), k) {
        for cols in Combinations::new(a.cols(), k) {
            if (0..k).all(|i| a.get(rows[i], cols[pi.values()[i] as usize])) {
                count += 1;
            }
        }
    }
    count
}

pub fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}
