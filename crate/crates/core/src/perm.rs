//! Permutations, pattern occurrences and the copy-count distribution over S_n.
//!
//! Values and positions are stored 0-based. Text, JSON and the
//! `from_one_based` constructor use the conventional 1-based one-line
//! notation, so `"2,4,1,3"` is the permutation sending 1 ↦ 2, 2 ↦ 4, …

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::combin::{binomial, next_permutation};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A permutation of `{0, …, n-1}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Builds from 0-based values, checking the bijection property.
    pub fn from_zero_based(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for (pos, &v) in values.iter().enumerate() {
            let v = v as usize;
            if v >= n {
                return Err(Error::InvalidPermutation(format!("value {} at position {} is out of range 1..{n}", v + 1, pos + 1)));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("value {} repeated at position {}", v + 1, pos + 1)));
            }
        }
        Ok(Permutation { values })
    }

    /// Builds from 1-based one-line notation.
    pub fn from_one_based(values: &[u32]) -> Result<Self> {
        if let Some(pos) = values.iter().position(|&v| v == 0) {
            return Err(Error::InvalidPermutation(format!("value 0 at position {}", pos + 1)));
        }
        Self::from_zero_based(values.iter().map(|v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation { values: (0..n as u32).collect() }
    }

    /// n, n-1, …, 1.
    pub fn decreasing(n: usize) -> Self {
        Permutation { values: (0..n as u32).rev().collect() }
    }

    pub(crate) fn from_values_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Self::from_zero_based(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 0-based values.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn one_based(&self) -> Vec<u32> {
        self.values.iter().map(|v| v + 1).collect()
    }

    /// Position reversal: σ(n), …, σ(1).
    pub fn reverse(&self) -> Self {
        Permutation { values: self.values.iter().rev().copied().collect() }
    }

    /// Value complement: i ↦ n + 1 − σ(i).
    pub fn complement(&self) -> Self {
        let n = self.len() as u32;
        Permutation { values: self.values.iter().map(|v| n - 1 - v).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { values: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Comma-separated 1-based one-line notation. The empty string is the
    /// empty permutation.
    fn from_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Permutation { values: Vec::new() });
        }
        let mut values = Vec::new();
        let mut offset = 0;
        for field in text.split(',') {
            let lead = field.len() - field.trim_start().len();
            let v: u32 = field
                .trim()
                .parse()
                .map_err(|_| Error::parse(offset + lead, format!("expected a positive integer, found {:?}", field.trim())))?;
            if v == 0 {
                return Err(Error::parse(offset + lead, "permutation values are 1-based"));
            }
            values.push(v);
            offset += field.len() + 1;
        }
        Self::from_one_based(&values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Positions x₁ < ⋯ < x_k of σ whose values are order-isomorphic to π.
/// Stored 0-based; serialized 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    indices: Vec<usize>,
}

impl Occurrence {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

impl Serialize for Occurrence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// Depth-first walk over all occurrences of `pattern` in `text`, in
/// lexicographic order of index tuples. The visitor may stop the walk early.
pub(crate) fn visit_occurrences<F>(text: &[u32], pattern: &[u32], mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let mut chosen = Vec::with_capacity(pattern.len());
    walk(text, pattern, &mut chosen, 0, &mut visit)
}

fn walk<F>(text: &[u32], pattern: &[u32], chosen: &mut Vec<usize>, start: usize, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let j = chosen.len();
    let k = pattern.len();
    if j == k {
        return visit(chosen);
    }
    let n = text.len();
    if n < k {
        return ControlFlow::Continue(());
    }
    let pj = pattern[j];
    for x in start..=n - (k - j) {
        let v = text[x];
        let consistent = chosen.iter().zip(pattern).all(|(&xi, &pi)| (pi < pj) == (text[xi] < v));
        if consistent {
            chosen.push(x);
            let flow = walk(text, pattern, chosen, x + 1, visit);
            chosen.pop();
            flow?;
        }
    }
    ControlFlow::Continue(())
}

pub(crate) fn count_in(text: &[u32], pattern: &[u32]) -> u64 {
    let mut count = 0u64;
    let _ = visit_occurrences(text, pattern, |_| {
        count = count.checked_add(1).expect("occurrence count overflows u64");
        ControlFlow::Continue(())
    });
    count
}

/// True iff σ contains π. The empty pattern is contained in everything.
pub fn contains(sigma: &Permutation, pi: &Permutation) -> bool {
    visit_occurrences(&sigma.values, &pi.values, |_| ControlFlow::Break(())).is_break()
}

/// Number of occurrences of π in σ; the empty pattern occurs exactly once.
pub fn count_occurrences(sigma: &Permutation, pi: &Permutation) -> u64 {
    count_in(&sigma.values, &pi.values)
}

/// All occurrences, lexicographically ordered by index tuple.
pub fn enumerate_occurrences(sigma: &Permutation, pi: &Permutation) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let _ = visit_occurrences(&sigma.values, &pi.values, |idx| {
        out.push(Occurrence { indices: idx.to_vec() });
        ControlFlow::Continue(())
    });
    out
}

/// Lexicographic stream of the permutations of length n that start with a
/// fixed prefix.
#[derive(Debug, Clone)]
pub struct Permutations {
    prefix_len: usize,
    current: Vec<u32>,
    done: bool,
}

impl Permutations {
    fn with_prefix(n: usize, prefix: &[u32]) -> Self {
        let mut current = prefix.to_vec();
        current.extend((0..n as u32).filter(|v| !prefix.contains(v)));
        Permutations { prefix_len: prefix.len(), current, done: false }
    }

    /// Calls `f` on every remaining permutation without allocating.
    pub fn for_each_values<F: FnMut(&[u32])>(mut self, mut f: F) {
        if self.done {
            return;
        }
        loop {
            f(&self.current);
            if !next_permutation(&mut self.current[self.prefix_len..]) {
                break;
            }
        }
        self.done = true;
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = Permutation::from_values_unchecked(self.current.clone());
        self.done = !next_permutation(&mut self.current[self.prefix_len..]);
        Some(out)
    }
}

/// All n! permutations in lexicographic order.
pub fn enumerate_permutations(n: usize, limits: &Limits) -> Result<Permutations> {
    limits.check_enumeration(n)?;
    Ok(Permutations::with_prefix(n, &[]))
}

/// Splits S_n into disjoint lexicographic blocks keyed by prefixes of length
/// `depth`. Concatenating the blocks in order reproduces
/// [`enumerate_permutations`].
pub fn prefix_blocks(n: usize, depth: usize, limits: &Limits) -> Result<Vec<Permutations>> {
    limits.check_enumeration(n)?;
    let depth = depth.min(n);
    let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..depth {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                (0..n as u32)
                    .filter(|v| !p.contains(v))
                    .map(|v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(prefixes.iter().map(|p| Permutations::with_prefix(n, p)).collect())
}

/// Prefix depth used for the parallel passes.
pub(crate) fn parallel_depth(n: usize) -> usize {
    match n {
        0..=4 => 0,
        5..=7 => 1,
        _ => 2,
    }
}

/// Parallel fold over S_n; the reduction must be associative.
pub(crate) fn par_fold_permutations<T, Id, F, R>(n: usize, limits: &Limits, identity: Id, fold: F, reduce: R) -> Result<T>
where
    T: Send,
    Id: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &[u32]) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let blocks = prefix_blocks(n, parallel_depth(n), limits)?;
    Ok(blocks
        .into_par_iter()
        .map(|block| {
            let mut acc = identity();
            block.for_each_values(|v| fold(&mut acc, v));
            acc
        })
        .reduce(&identity, &reduce))
}

/// Exact histogram c ↦ #{σ ∈ S_n : σ has exactly c copies of π}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyCountDistribution {
    pub n: usize,
    pub pattern: Permutation,
    pub histogram: BTreeMap<u64, u64>,
}

impl CopyCountDistribution {
    pub fn total(&self) -> u64 {
        self.histogram.values().sum()
    }

    /// |S_n(m, π)|: permutations with at most m copies.
    pub fn at_most(&self, m: u64) -> u64 {
        self.histogram.range(..=m).map(|(_, c)| c).sum()
    }

    /// Number of permutations with no copy at all.
    pub fn avoiders(&self) -> u64 {
        self.histogram.get(&0).copied().unwrap_or(0)
    }

    /// Largest possible copy count, C(n, k).
    pub fn max_copies(&self) -> u64 {
        binomial(self.n as u64, self.pattern.len() as u64).expect("C(n,k) fits u64 at enumerable n")
    }
}

impl Serialize for CopyCountDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Histogram<'a>(&'a BTreeMap<u64, u64>);
        impl Serialize for Histogram<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (c, count) in self.0 {
                    map.serialize_entry(&c.to_string(), &count.to_string())?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("pattern", &self.pattern)?;
        map.serialize_entry("histogram", &Histogram(&self.histogram))?;
        map.serialize_entry("total", &self.total().to_string())?;
        map.end()
    }
}

/// One pass over S_n tallying copies of π.
pub fn copy_count_distribution(n: usize, pi: &Permutation, limits: &Limits) -> Result<CopyCountDistribution> {
    let pattern = pi.values.clone();
    let histogram = par_fold_permutations(
        n,
        limits,
        BTreeMap::new,
        |hist: &mut BTreeMap<u64, u64>, sigma| {
            *hist.entry(count_in(sigma, &pattern)).or_insert(0) += 1;
        },
        |mut a, b| {
            for (c, count) in b {
                *a.entry(c).or_insert(0) += count;
            }
            a
        },
    )?;
    Ok(CopyCountDistribution { n, pattern: pi.clone(), histogram })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let s = p("2,4,1,3");
        assert_eq!(s.values(), &[1, 3, 0, 2]);
        assert_eq!(s.to_string(), "2,4,1,3");
        assert_eq!(p("").len(), 0);
        assert_eq!(p(" 1, 2 ").to_string(), "1,2");
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!("1,x,3".parse::<Permutation>(), Err(Error::Parse { position: 2, .. })));
        assert!(matches!("1,0".parse::<Permutation>(), Err(Error::Parse { position: 2, .. })));
        assert!(matches!("1,1".parse::<Permutation>(), Err(Error::InvalidPermutation(_))));
        assert!(matches!("1,3".parse::<Permutation>(), Err(Error::InvalidPermutation(_))));
    }

    #[test]
    fn contains_examples() {
        assert!(contains(&p("2,3,1"), &p("1,2")));
        assert!(!contains(&p("3,2,1"), &p("1,2")));
        assert!(!contains(&p("2,4,1,3"), &p("1,2,3")));
        assert!(!contains(&p("1,2"), &p("1,2,3")));
    }

    #[test]
    fn empty_pattern() {
        assert!(contains(&p("2,1"), &p("")));
        assert_eq!(count_occurrences(&p("2,1"), &p("")), 1);
        assert_eq!(count_occurrences(&p(""), &p("")), 1);
        assert_eq!(enumerate_occurrences(&p("2,1"), &p("")).len(), 1);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_occurrences(&Permutation::identity(5), &Permutation::identity(3)), 10);
        assert_eq!(count_occurrences(&p("2,4,1,3"), &p("1,2")), 3);
        assert_eq!(count_occurrences(&p("3,2,1"), &p("2,1")), 3);
        assert_eq!(count_occurrences(&p("1,2"), &p("1,2,3")), 0);
    }

    #[test]
    fn enumerate_examples() {
        let occ: Vec<_> = enumerate_occurrences(&p("2,4,1,3"), &p("1,2")).iter().map(Occurrence::one_based).collect();
        assert_eq!(occ, vec![vec![1, 2], vec![1, 4], vec![3, 4]]);
        assert!(enumerate_occurrences(&p("3,2,1"), &p("1,2")).is_empty());
        let occ = enumerate_occurrences(&Permutation::identity(3), &Permutation::identity(3));
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].one_based(), vec![1, 2, 3]);
        assert_eq!(serde_json::to_string(&occ).unwrap(), "[[1,2,3]]");
    }

    #[test]
    fn permutation_stream() {
        let limits = Limits::default();
        let all: Vec<_> = enumerate_permutations(0, &limits).unwrap().collect();
        assert_eq!(all, vec![Permutation::identity(0)]);
        let all: Vec<_> = enumerate_permutations(3, &limits).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].to_string(), "1,2,3");
        assert_eq!(all[5].to_string(), "3,2,1");
        let mut four: Vec<_> = enumerate_permutations(4, &limits).unwrap().collect();
        assert!(four.windows(2).all(|w| w[0] < w[1]));
        four.dedup();
        assert_eq!(four.len(), 24);
    }

    #[test]
    fn stream_cap() {
        let limits = Limits { enumeration_cap: 5, ..Limits::default() };
        let err = enumerate_permutations(6, &limits).unwrap_err();
        assert!(err.is_limit());
        assert!(err.to_string().contains('5'));
    }

    #[test]
    fn prefix_blocks_concatenate_to_stream() {
        let limits = Limits::default();
        let full: Vec<_> = enumerate_permutations(5, &limits).unwrap().collect();
        for depth in 0..=5 {
            let joined: Vec<_> = prefix_blocks(5, depth, &limits).unwrap().into_iter().flatten().collect();
            assert_eq!(joined, full, "depth {depth}");
        }
    }

    #[test]
    fn distribution_examples() {
        let limits = Limits::default();
        let d = copy_count_distribution(3, &p("1,2"), &limits).unwrap();
        assert_eq!(d.histogram, BTreeMap::from([(0, 1), (1, 2), (2, 2), (3, 1)]));
        let d = copy_count_distribution(3, &p("1,2,3"), &limits).unwrap();
        assert_eq!(d.histogram, BTreeMap::from([(0, 5), (1, 1)]));
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"n":3,"pattern":"1,2,3","histogram":{"0":"5","1":"1"},"total":"6"}"#);
    }

    #[test]
    fn inverse_and_symmetries() {
        let s = p("2,4,1,3");
        assert_eq!(s.inverse().to_string(), "3,1,4,2");
        assert_eq!(s.reverse().to_string(), "3,1,4,2");
        assert_eq!(s.complement().to_string(), "3,1,4,2");
        assert!(Permutation::identity(4).is_identity());
    }
}
