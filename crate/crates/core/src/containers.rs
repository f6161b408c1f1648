//! The grid hypergraph H whose independent canonical sets are exactly the
//! Λ-avoiding permutations.
//!
//! Vertices are the cells v(i, j) of an n×n grid, encoded as the flat index
//! `(i−1)·n + (j−1)` (0-based `i·n + j` internally). For each edge
//! {x₁ < ⋯ < x_k} of Λ and each column set y₁ < ⋯ < y_k, H has the edge
//! {v(x₁, y_{π(1)}), …, v(x_k, y_{π(k)})}: the row coordinate carries the
//! Λ constraint.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::combin::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::hypergraph::KUniformHypergraph;
use crate::limits::Limits;
use crate::perm::Permutation;

/// Largest grid side; cells are tracked in a u128.
pub const MAX_GRID_SIDE: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternHypergraph {
    n: usize,
    k: usize,
    pattern: Permutation,
    edges: BTreeSet<Vec<u32>>,
    /// Edge masks grouped by their largest cell.
    by_max: Vec<Vec<u128>>,
}

impl PatternHypergraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted flat-index edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.edges.iter().map(Vec::as_slice)
    }

    fn masks(&self) -> impl Iterator<Item = u128> + '_ {
        self.by_max.iter().flatten().copied()
    }
}

impl Serialize for PatternHypergraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PatternHypergraph", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("pattern", &self.pattern)?;
        st.serialize_field("edges", &self.edges)?;
        st.end()
    }
}

fn cell_mask(cells: impl IntoIterator<Item = u32>) -> u128 {
    cells.into_iter().fold(0u128, |m, c| m | 1 << c)
}

/// Builds H for pattern π over Λ. Refused when |E(Λ)|·C(n,k) exceeds the
/// edge ceiling.
pub fn build_h(n: usize, pi: &Permutation, lambda: &KUniformHypergraph, limits: &Limits) -> Result<PatternHypergraph> {
    let k = pi.len();
    if lambda.n() != n || lambda.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "hypergraph is {}-uniform on {} vertices, expected {k}-uniform on {n}",
            lambda.k(),
            lambda.n()
        )));
    }
    if n > MAX_GRID_SIDE {
        return Err(Error::cap("grid side", n as u128, MAX_GRID_SIDE as u128));
    }
    let per_edge = binomial(n as u64, k as u64).unwrap_or(u64::MAX) as u128;
    let total = lambda.edge_count() as u128 * per_edge;
    if total > limits.edge_ceiling as u128 {
        return Err(Error::cap("grid hypergraph edge count", total, limits.edge_ceiling));
    }
    let mut edges = BTreeSet::new();
    let mut by_max = vec![Vec::new(); n * n];
    let columns: Vec<Vec<usize>> = Combinations::new(n, k).collect();
    for x in lambda.edges() {
        for y in &columns {
            let mut edge: Vec<u32> = x.iter().zip(pi.values()).map(|(&row, &rank)| row * n as u32 + y[rank as usize] as u32).collect();
            edge.sort_unstable();
            if let Some(&max) = edge.last() {
                by_max[max as usize].push(cell_mask(edge.iter().copied()));
            }
            edges.insert(edge);
        }
    }
    Ok(PatternHypergraph { n, k, pattern: pi.clone(), edges, by_max })
}

/// n grid cells with one per row and one per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalSet {
    n: usize,
    /// 0-based (row, column), sorted by row.
    cells: Vec<(u32, u32)>,
}

impl CanonicalSet {
    /// Accepts any cell order; rejects sets that are not permutation supports.
    pub fn from_cells(n: usize, cells: &[(u32, u32)]) -> Result<Self> {
        let mut sorted = cells.to_vec();
        sorted.sort_unstable();
        let rows_ok = sorted.len() == n && sorted.iter().enumerate().all(|(i, &(r, _))| r as usize == i);
        let mut cols: Vec<u32> = sorted.iter().map(|&(_, c)| c).collect();
        cols.sort_unstable();
        let cols_ok = cols.iter().enumerate().all(|(j, &c)| c as usize == j);
        if !rows_ok || !cols_ok {
            return Err(Error::InvalidArgument("cells must hit each row and each column exactly once".into()));
        }
        Ok(CanonicalSet { n, cells: sorted })
    }

    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_values_unchecked(self.cells.iter().map(|&(_, c)| c).collect())
    }

    /// Flat-index bitmask; needs n ≤ 11.
    pub fn mask(&self) -> u128 {
        assert!(self.n <= MAX_GRID_SIDE);
        cell_mask(self.cells.iter().map(|&(r, c)| r * self.n as u32 + c))
    }
}

impl Serialize for CanonicalSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cells: Vec<[u32; 2]> = self.cells.iter().map(|&(r, c)| [r + 1, c + 1]).collect();
        cells.serialize(s)
    }
}

/// The cells {(i, σ(i))}.
pub fn canonical_set(sigma: &Permutation) -> CanonicalSet {
    CanonicalSet { n: sigma.len(), cells: sigma.values().iter().enumerate().map(|(i, &v)| (i as u32, v)).collect() }
}

/// True iff no edge of H lies inside the cell set `mask`.
pub fn is_independent_mask(h: &PatternHypergraph, mask: u128) -> bool {
    h.masks().all(|e| e & mask != e)
}

/// True iff no edge of H lies inside the given 0-based cells.
pub fn is_independent(h: &PatternHypergraph, cells: &[(usize, usize)]) -> Result<bool> {
    let n = h.n;
    if let Some(&(r, c)) = cells.iter().find(|&&(r, c)| r >= n || c >= n) {
        return Err(Error::InvalidArgument(format!("cell ({}, {}) is outside the {n}×{n} grid", r + 1, c + 1)));
    }
    Ok(is_independent_mask(h, cell_mask(cells.iter().map(|&(r, c)| (r * n + c) as u32))))
}

/// Exact number of independent sets of H with `size` cells. Refused when
/// C(n², size) exceeds the independent-set ceiling.
pub fn count_independent_of_size(h: &PatternHypergraph, size: usize, limits: &Limits) -> Result<BigUint> {
    let cells = h.n * h.n;
    let candidates = binomial(cells as u64, size as u64).unwrap_or(u64::MAX);
    if candidates > limits.independent_ceiling {
        return Err(Error::cap("candidate set count", candidates, limits.independent_ceiling));
    }
    if size == 0 {
        return Ok(BigUint::from(1u32));
    }
    let total: u64 = (0..cells)
        .into_par_iter()
        .map(|first| {
            let mask = 1u128 << first;
            if violates(h, mask, first) {
                return 0;
            }
            let mut count = 0;
            extend(h, mask, first + 1, size - 1, &mut count);
            count
        })
        .sum();
    Ok(BigUint::from(total))
}

fn violates(h: &PatternHypergraph, mask: u128, added: usize) -> bool {
    h.by_max[added].iter().any(|&e| e & !mask == 0)
}

fn extend(h: &PatternHypergraph, mask: u128, start: usize, remaining: usize, count: &mut u64) {
    if remaining == 0 {
        *count += 1;
        return;
    }
    let cells = h.n * h.n;
    for cell in start..=cells.saturating_sub(remaining) {
        let next = mask | 1 << cell;
        if !violates(h, next, cell) {
            extend(h, next, cell + 1, remaining - 1, count);
        }
    }
}

/// Δ_ℓ(H): the largest number of edges through any ℓ-set of cells. Only
/// ℓ-subsets of actual edges are tallied.
pub fn delta_ell(h: &PatternHypergraph, ell: usize) -> Result<u64> {
    if ell == 0 || ell > h.k {
        return Err(Error::InvalidArgument(format!("ℓ = {ell} must lie in 1..={}", h.k)));
    }
    let mut tally: HashMap<u128, u64> = HashMap::new();
    for edge in &h.edges {
        for sub in Combinations::new(edge.len(), ell) {
            *tally.entry(cell_mask(sub.iter().map(|&i| edge[i]))).or_insert(0) += 1;
        }
    }
    Ok(tally.values().copied().max().unwrap_or(0))
}
