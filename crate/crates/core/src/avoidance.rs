//! Pattern avoidance restricted to hypergraph edges, and the expected number
//! of avoiders when the hypergraph is random.
//!
//! σ Λ-contains π when some occurrence of π in σ sits on an index set that
//! is an edge of Λ. Over an Erdős–Rényi Λ with edge probability α, each
//! occurrence survives independently, so
//!
//! ```text
//! E|Av_{n,Λ}(π)| = Σ_{σ ∈ S_n} (1 − α)^{copies of π in σ}
//! ```
//!
//! which [`exact_expected_avoiders`] evaluates exactly from one pass over S_n.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{binomial, factorial};
use crate::error::{Error, Result};
use crate::hypergraph::{mask_of, random_uniform_with, KUniformHypergraph};
use crate::limits::Limits;
use crate::perm::{copy_count_distribution, count_in, par_fold_permutations, visit_occurrences, CopyCountDistribution, Permutation};
use crate::rational::{format_decimal, ln_rational, serialize_rational, Probability};
use crate::rng;

fn check_dims(n: usize, k: usize, lambda: &KUniformHypergraph) -> Result<()> {
    if lambda.n() != n || lambda.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "hypergraph is {}-uniform on {} vertices, pattern needs {k}-uniform on {n}",
            lambda.k(),
            lambda.n()
        )));
    }
    Ok(())
}

fn lambda_walk<F: FnMut() -> ControlFlow<()>>(
    text: &[u32],
    pattern: &[u32],
    lambda: &KUniformHypergraph,
    mut on_edge: F,
) -> ControlFlow<()> {
    if lambda.edge_count() == 0 {
        return ControlFlow::Continue(());
    }
    visit_occurrences(
        text,
        pattern,
        |idx| {
            if lambda.contains_mask(mask_of(idx.iter().copied())) {
                on_edge()
            } else {
                ControlFlow::Continue(())
            }
        },
    )
}

pub(crate) fn lambda_avoids(text: &[u32], pattern: &[u32], lambda: &KUniformHypergraph) -> bool {
    lambda_walk(text, pattern, lambda, || ControlFlow::Break(())).is_continue()
}

/// True iff an occurrence of π in σ has its index set in E(Λ).
pub fn lambda_contains(sigma: &Permutation, pi: &Permutation, lambda: &KUniformHypergraph) -> Result<bool> {
    check_dims(sigma.len(), pi.len(), lambda)?;
    Ok(!lambda_avoids(sigma.values(), pi.values(), lambda))
}

/// Occurrences of π in σ whose index sets are edges of Λ.
pub fn count_lambda_occurrences(sigma: &Permutation, pi: &Permutation, lambda: &KUniformHypergraph) -> Result<u64> {
    check_dims(sigma.len(), pi.len(), lambda)?;
    let mut count = 0u64;
    let _ = lambda_walk(sigma.values(), pi.values(), lambda, || {
        count += 1;
        ControlFlow::Continue(())
    });
    Ok(count)
}

/// Result of an exhaustive pass over S_n.
#[derive(Debug, Clone, Serialize)]
pub struct AvoiderReport {
    pub n: usize,
    pub k: usize,
    pub pattern: Permutation,
    pub lambda_edges: usize,
    pub lambda_complete: bool,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub avoiders: Option<Vec<Permutation>>,
}

/// Counts (and optionally lists, in lexicographic order) the permutations of
/// length n that Λ-avoid π.
pub fn enumerate_avoiders(
    n: usize,
    pi: &Permutation,
    lambda: &KUniformHypergraph,
    limits: &Limits,
    keep_list: bool,
) -> Result<AvoiderReport> {
    check_dims(n, pi.len(), lambda)?;
    limits.check_enumeration(n)?;
    let pattern = pi.values();
    let (count, list) = par_fold_permutations(
        n,
        limits,
        || (0u64, Vec::new()),
        |acc: &mut (u64, Vec<Permutation>), sigma| {
            if lambda_avoids(sigma, pattern, lambda) {
                acc.0 += 1;
                if keep_list {
                    acc.1.push(Permutation::from_values_unchecked(sigma.to_vec()));
                }
            }
        },
        |mut a, b| {
            a.0 += b.0;
            a.1.extend(b.1);
            a
        },
    )?;
    Ok(AvoiderReport {
        n,
        k: pi.len(),
        pattern: pi.clone(),
        lambda_edges: lambda.edge_count(),
        lambda_complete: lambda.is_complete(),
        count,
        avoiders: keep_list.then_some(list),
    })
}

/// Exact E|Av_{n,Λ}(π)| with the α^{−n/(k−1)} bound shape and the measured
/// constant (ln E + (n/(k−1))·ln α)/n.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectationReport {
    pub n: usize,
    pub k: usize,
    pub pattern: Permutation,
    pub alpha: Probability,
    #[serde(serialize_with = "serialize_rational")]
    pub exact_value: BigRational,
    pub exact_value_decimal: String,
    /// α^{−n/(k−1)}; absent when α = 0 or k < 2.
    pub bound_value: Option<f64>,
    pub empirical_constant: Option<f64>,
}

/// Σ_c histogram[c]·(1−α)^c in exact arithmetic.
pub fn expectation_from_distribution(dist: &CopyCountDistribution, alpha: &Probability) -> ExpectationReport {
    let q = alpha.complement();
    let mut exact = BigRational::zero();
    for (&c, &count) in &dist.histogram {
        let weight = if c == 0 { BigRational::one() } else { q.pow(c as i32) };
        exact += weight * BigRational::from_integer(BigInt::from(count));
    }
    let n = dist.n;
    let k = dist.pattern.len();
    let ln_alpha = ln_rational(alpha.value());
    let exponent = (k >= 2).then(|| n as f64 / (k - 1) as f64);
    let bound_value = exponent.zip(ln_alpha).map(|(e, la)| (-e * la).exp());
    let empirical_constant = match (exponent, ln_alpha, ln_rational(&exact)) {
        (Some(e), Some(la), Some(le)) if n > 0 => Some((le + e * la) / n as f64),
        _ => None,
    };
    ExpectationReport {
        n,
        k,
        pattern: dist.pattern.clone(),
        alpha: alpha.clone(),
        exact_value_decimal: format_decimal(&exact, 12),
        exact_value: exact,
        bound_value,
        empirical_constant,
    }
}

/// Exact expectation through the copy-count distribution.
pub fn exact_expected_avoiders(n: usize, k: usize, pi: &Permutation, alpha: &Probability, limits: &Limits) -> Result<ExpectationReport> {
    if pi.len() != k {
        return Err(Error::DimensionMismatch(format!("pattern has length {}, expected {k}", pi.len())));
    }
    let dist = copy_count_distribution(n, pi, limits)?;
    Ok(expectation_from_distribution(&dist, alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum McMethod {
    /// Uniform σ, weight n!·(1−α)^{c(σ)}.
    Sigma,
    /// Random Λ, exact |Av_{n,Λ}(π)|.
    Lambda,
}

#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub method: McMethod,
    pub n: usize,
    pub pattern: Permutation,
    pub alpha: Probability,
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
}

fn mean_and_se(sum: f64, sum_sq: f64, samples: usize) -> (f64, f64) {
    let t = samples as f64;
    let mean = sum / t;
    if samples < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0);
    (mean, (var / t).sqrt())
}

/// n!·mean over uniform σ of (1−α)^{c(σ)}. Batch `b` draws from sub-stream
/// `b` of `seed`; batch sums are combined in batch order.
pub fn mc_expected_avoiders_by_sigma(n: usize, pi: &Permutation, alpha: &Probability, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let n_fact = factorial(n as u64).ok_or_else(|| Error::InvalidArgument(format!("{n}! overflows u64")))? as f64;
    let q = crate::rational::to_f64(&alpha.complement());
    let pattern = pi.values();
    let partial: Vec<(f64, f64)> = rng::batches(samples)
        .into_par_iter()
        .map(|(stream, len)| {
            let mut g = rng::substream(seed, stream);
            let mut sigma: Vec<u32> = (0..n as u32).collect();
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..len {
                sigma.shuffle(&mut g);
                let c = count_in(&sigma, pattern);
                let w = if c == 0 { 1.0 } else { q.powi(c as i32) };
                s += w;
                s2 += w * w;
            }
            (s, s2)
        })
        .collect();
    let (sum, sum_sq) = partial.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mean, se) = mean_and_se(sum, sum_sq, samples);
    Ok(McEstimate {
        method: McMethod::Sigma,
        n,
        pattern: pi.clone(),
        alpha: alpha.clone(),
        samples,
        seed,
        estimate: n_fact * mean,
        std_error: n_fact * se,
    })
}

/// Mean of |Av_{n,Λ}(π)| over independently sampled Λ. Sample `s` draws its
/// hypergraph from sub-stream `s` of `seed`.
pub fn mc_expected_avoiders_by_lambda(
    n: usize,
    k: usize,
    pi: &Permutation,
    alpha: &Probability,
    samples: usize,
    seed: u64,
    limits: &Limits,
) -> Result<McEstimate> {
    if pi.len() != k {
        return Err(Error::DimensionMismatch(format!("pattern has length {}, expected {k}", pi.len())));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    limits.check_enumeration(n)?;
    let n_fact = factorial(n as u64).expect("n within the enumeration cap");
    let edges = binomial(n as u64, k as u64).unwrap_or(u64::MAX).max(1);
    let cost = (samples as u128) * (n_fact as u128) * (edges as u128);
    if cost > limits.lambda_cost_ceiling as u128 {
        return Err(Error::cap("hypergraph-sampling cost", cost, limits.lambda_cost_ceiling));
    }
    let pattern = pi.values();
    let counts: Vec<u64> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut g = rng::substream(seed, s);
            let lambda = random_uniform_with(n, k, alpha, &mut g)?;
            let blocks = crate::perm::prefix_blocks(n, 0, limits)?;
            let mut count = 0u64;
            for block in blocks {
                block.for_each_values(|sigma| {
                    if lambda_avoids(sigma, pattern, &lambda) {
                        count += 1;
                    }
                });
            }
            Ok(count)
        })
        .collect::<Result<_>>()?;
    let sum: f64 = counts.iter().map(|&c| c as f64).sum();
    let sum_sq: f64 = counts.iter().map(|&c| (c as f64) * (c as f64)).sum();
    let (mean, se) = mean_and_se(sum, sum_sq, samples);
    Ok(McEstimate { method: McMethod::Lambda, n, pattern: pi.clone(), alpha: alpha.clone(), samples, seed, estimate: mean, std_error: se })
}
