//! k-uniform hypergraphs on `[n]`.
//!
//! JSON form: `{"n": 4, "k": 2, "edges": [[1,3],[1,4],…]}` with 1-based
//! vertices. Edge-list text form: one sorted k-tuple per line, vertices
//! separated by spaces or commas.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::Probability;
use crate::rng;

/// Largest supported vertex count; edges are also kept as u128 bitmasks.
pub const MAX_VERTICES: usize = 128;

/// A k-uniform hypergraph with a canonical sorted edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KUniformHypergraph {
    n: usize,
    k: usize,
    edges: BTreeSet<Vec<u32>>,
    masks: HashSet<u128>,
}

pub(crate) fn mask_of<I: IntoIterator<Item = usize>>(vertices: I) -> u128 {
    vertices.into_iter().fold(0u128, |m, v| m | 1 << v)
}

impl KUniformHypergraph {
    /// Builds from 0-based edges. Each edge is sorted; duplicates collapse.
    pub fn new<I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        if n > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!("at most {MAX_VERTICES} vertices are supported, got {n}")));
        }
        let mut g = Self::empty(n, k);
        for mut edge in edges {
            edge.sort_unstable();
            if edge.len() != k {
                return Err(Error::InvalidArgument(format!("edge {:?} does not have {k} vertices", one_based(&edge))));
            }
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!("edge {:?} repeats a vertex", one_based(&edge))));
            }
            if edge.iter().any(|&v| v as usize >= n) {
                return Err(Error::InvalidArgument(format!("edge {:?} leaves vertex range 1..{n}", one_based(&edge))));
            }
            g.insert(edge);
        }
        Ok(g)
    }

    /// Builds from 1-based edges.
    pub fn from_one_based<I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let shifted: Result<Vec<Vec<u32>>> = edges
            .into_iter()
            .map(|e| e.iter().map(|&v| v.checked_sub(1).ok_or_else(|| Error::InvalidArgument("vertices are 1-based".into()))).collect())
            .collect();
        Self::new(n, k, shifted?)
    }

    pub fn empty(n: usize, k: usize) -> Self {
        KUniformHypergraph { n, k, edges: BTreeSet::new(), masks: HashSet::new() }
    }

    /// All C(n, k) edges.
    pub fn complete(n: usize, k: usize) -> Self {
        let mut g = Self::empty(n, k);
        for e in Combinations::new(n, k) {
            g.insert(e.into_iter().map(|v| v as u32).collect());
        }
        g
    }

    fn insert(&mut self, edge: Vec<u32>) {
        self.masks.insert(mask_of(edge.iter().map(|&v| v as usize)));
        self.edges.insert(edge);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order, 0-based.
    pub fn edges(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.edges.iter().map(Vec::as_slice)
    }

    /// Membership for an increasing 0-based vertex tuple.
    pub fn contains_edge(&self, vertices: &[usize]) -> bool {
        vertices.len() == self.k && self.masks.contains(&mask_of(vertices.iter().copied()))
    }

    pub(crate) fn contains_mask(&self, mask: u128) -> bool {
        self.masks.contains(&mask)
    }

    pub fn is_complete(&self) -> bool {
        binomial(self.n as u64, self.k as u64) == Some(self.edges.len() as u64)
    }

    /// One sorted 1-based tuple per line.
    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|e| one_based(e).iter().map(u32::to_string).collect::<Vec<_>>().join(" ") + "\n").collect()
    }

    /// Parses the edge-list text form. Error positions are 1-based line numbers.
    pub fn parse_edge_list(n: usize, k: usize, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let edge: Vec<u32> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<u32>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::parse(lineno + 1, format!("bad vertex {t:?}"))),
                })
                .collect::<Result<_>>()?;
            let sorted = edge.windows(2).all(|w| w[0] < w[1]);
            if !sorted {
                return Err(Error::parse(lineno + 1, "edge tuple must be strictly increasing"));
            }
            edges.push(edge);
        }
        Self::new(n, k, edges)
    }
}

fn one_based(edge: &[u32]) -> Vec<u32> {
    edge.iter().map(|v| v + 1).collect()
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: usize,
    k: usize,
    edges: Vec<Vec<u32>>,
}

impl Serialize for KUniformHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphJson { n: self.n, k: self.k, edges: self.edges.iter().map(|e| one_based(e)).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KUniformHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = HypergraphJson::deserialize(d)?;
        KUniformHypergraph::from_one_based(raw.n, raw.k, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// Includes each of the C(n, k) candidate edges independently with
/// probability α, visiting candidates in lexicographic order.
pub fn random_uniform_with<R: Rng + ?Sized>(n: usize, k: usize, alpha: &Probability, rng: &mut R) -> Result<KUniformHypergraph> {
    if k > n {
        return Err(Error::InvalidArgument(format!("uniformity {k} exceeds vertex count {n}")));
    }
    if n > MAX_VERTICES {
        return Err(Error::InvalidArgument(format!("at most {MAX_VERTICES} vertices are supported, got {n}")));
    }
    let coin = alpha.bernoulli();
    let mut g = KUniformHypergraph::empty(n, k);
    for e in Combinations::new(n, k) {
        if coin.sample(rng) {
            g.insert(e.into_iter().map(|v| v as u32).collect());
        }
    }
    Ok(g)
}

/// Erdős–Rényi k-uniform hypergraph, deterministic per seed.
pub fn random_uniform_hypergraph(n: usize, k: usize, alpha: &Probability, seed: u64) -> Result<KUniformHypergraph> {
    random_uniform_with(n, k, alpha, &mut rng::seeded(seed))
}

/// Two parts {1..n/2} and {n/2+1..n}; every k-set not inside one part is an edge.
pub fn multipartite_lambda_star(n: usize, k: usize) -> Result<KUniformHypergraph> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("vertex count {n} must be even")));
    }
    if k > n / 2 {
        return Err(Error::InvalidArgument(format!("uniformity {k} exceeds the part size {}", n / 2)));
    }
    let half = (n / 2) as u32;
    let mut g = KUniformHypergraph::empty(n, k);
    for e in Combinations::new(n, k) {
        let e: Vec<u32> = e.into_iter().map(|v| v as u32).collect();
        let first_part = e.iter().all(|&v| v < half);
        let second_part = e.iter().all(|&v| v >= half);
        if !first_part && !second_part {
            g.insert(e);
        }
    }
    Ok(g)
}

/// A maximum clique (every k-subset an edge), found by exhaustive search.
/// Gated by the enumeration cap on n.
pub fn max_clique(lambda: &KUniformHypergraph, limits: &Limits) -> Result<Vec<u32>> {
    limits.check_enumeration(lambda.n)?;
    let mut best = Vec::new();
    let mut current = Vec::new();
    grow_clique(lambda, &mut current, 0, &mut best);
    Ok(best)
}

fn grow_clique(lambda: &KUniformHypergraph, current: &mut Vec<usize>, start: usize, best: &mut Vec<u32>) {
    if current.len() > best.len() {
        *best = current.iter().map(|&v| v as u32).collect();
    }
    let k = lambda.k;
    for v in start..lambda.n {
        if current.len() + (lambda.n - v) <= best.len() {
            return;
        }
        // only the new k-sets, the ones through v, need checking
        let fits = k == 0
            || current.len() + 1 < k
            || Combinations::new(current.len(), k - 1).all(|t| {
                let mask = mask_of(t.iter().map(|&i| current[i]).chain(std::iter::once(v)));
                lambda.contains_mask(mask)
            });
        if fits {
            current.push(v);
            grow_clique(lambda, current, v + 1, best);
            current.pop();
        }
    }
}

/// A verified collection of L-vertex cliques with per-vertex membership
/// bounds δ (minimum) and Δ (maximum).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCover {
    pub clique_size: usize,
    /// 0-based, each sorted.
    pub cliques: Vec<Vec<u32>>,
    pub delta: usize,
    pub big_delta: usize,
}

impl Serialize for CliqueCover {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            #[serde(rename = "L")]
            clique_size: usize,
            cliques: Vec<Vec<u32>>,
            delta: usize,
            #[serde(rename = "Delta")]
            big_delta: usize,
        }
        Out {
            clique_size: self.clique_size,
            cliques: self.cliques.iter().map(|c| one_based(c)).collect(),
            delta: self.delta,
            big_delta: self.big_delta,
        }
        .serialize(s)
    }
}

/// Why a proposed clique cover was rejected. Vertices are reported 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum CoverError {
    #[error("no cliques given")]
    Empty,
    #[error("clique {index} has {found} vertices, expected {expected}")]
    NonUniform { index: usize, expected: usize, found: usize },
    #[error("clique size {size} is below the uniformity {k}")]
    TooSmall { size: usize, k: usize },
    #[error("clique {index} is not a set of distinct vertices in 1..n")]
    BadVertices { index: usize },
    #[error("clique {index} misses the edge {witness:?}")]
    MissingEdge { index: usize, witness: Vec<u32> },
    #[error("vertex {vertex} lies in no clique")]
    Uncovered { vertex: u32 },
}

/// Checks that every listed set is a clique of Λ and every vertex is
/// covered, then reports δ and Δ. Cliques are 0-based vertex lists.
pub fn validate_clique_cover(lambda: &KUniformHypergraph, cliques: &[Vec<u32>]) -> std::result::Result<CliqueCover, CoverError> {
    let size = cliques.first().ok_or(CoverError::Empty)?.len();
    if size < lambda.k {
        return Err(CoverError::TooSmall { size, k: lambda.k });
    }
    let mut membership = vec![0usize; lambda.n];
    let mut normalized = Vec::with_capacity(cliques.len());
    for (index, clique) in cliques.iter().enumerate() {
        if clique.len() != size {
            return Err(CoverError::NonUniform { index: index + 1, expected: size, found: clique.len() });
        }
        let mut c = clique.clone();
        c.sort_unstable();
        if c.windows(2).any(|w| w[0] == w[1]) || c.iter().any(|&v| v as usize >= lambda.n) {
            return Err(CoverError::BadVertices { index: index + 1 });
        }
        for t in Combinations::new(size, lambda.k) {
            let witness: Vec<usize> = t.iter().map(|&i| c[i] as usize).collect();
            if !lambda.contains_edge(&witness) {
                return Err(CoverError::MissingEdge { index: index + 1, witness: witness.iter().map(|&v| v as u32 + 1).collect() });
            }
        }
        for &v in &c {
            membership[v as usize] += 1;
        }
        normalized.push(c);
    }
    if let Some(v) = membership.iter().position(|&m| m == 0) {
        return Err(CoverError::Uncovered { vertex: v as u32 + 1 });
    }
    Ok(CliqueCover {
        clique_size: size,
        cliques: normalized,
        delta: membership.iter().copied().min().unwrap_or(0),
        big_delta: membership.iter().copied().max().unwrap_or(0),
    })
}

/// Sliding windows {i, …, i+L−1} (mod n) starting at every vertex.
pub fn sliding_window_cover(n: usize, size: usize) -> Vec<Vec<u32>> {
    (0..n)
        .map(|i| {
            let mut c: Vec<u32> = (0..size).map(|d| ((i + d) % n) as u32).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

/// Number of edges per vertex degree, used by reports.
pub fn degree_histogram(lambda: &KUniformHypergraph) -> BTreeMap<usize, usize> {
    let mut degree = vec![0usize; lambda.n];
    for e in lambda.edges() {
        for &v in e {
            degree[v as usize] += 1;
        }
    }
    let mut hist = BTreeMap::new();
    for d in degree {
        *hist.entry(d).or_insert(0) += 1;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(s: &str) -> Probability {
        Probability::parse(s).unwrap()
    }

    #[test]
    fn validation_rejects_bad_edges() {
        assert!(KUniformHypergraph::new(3, 2, vec![vec![0, 0]]).is_err());
        assert!(KUniformHypergraph::new(3, 2, vec![vec![0, 3]]).is_err());
        assert!(KUniformHypergraph::new(3, 2, vec![vec![0, 1, 2]]).is_err());
        let g = KUniformHypergraph::new(3, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges().next(), Some(&[0u32, 1][..]));
    }

    #[test]
    fn random_extremes() {
        let g = random_uniform_hypergraph(7, 3, &alpha("1"), 5).unwrap();
        assert_eq!(g.edge_count(), 35);
        assert!(g.is_complete());
        let g = random_uniform_hypergraph(7, 3, &alpha("0"), 5).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(random_uniform_hypergraph(3, 4, &alpha("1/2"), 5).is_err());
        assert_eq!(
            random_uniform_hypergraph(9, 3, &alpha("1/3"), 42).unwrap(),
            random_uniform_hypergraph(9, 3, &alpha("1/3"), 42).unwrap()
        );
    }

    #[test]
    fn lambda_star_examples() {
        let g = multipartite_lambda_star(4, 2).unwrap();
        let edges: Vec<Vec<u32>> = g.edges().map(one_based).collect();
        assert_eq!(edges, vec![vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]]);
        assert!(!g.contains_edge(&[0, 1]));
        assert!(!g.contains_edge(&[2, 3]));
        assert_eq!(multipartite_lambda_star(6, 3).unwrap().edge_count(), 18);
        assert!(multipartite_lambda_star(5, 2).is_err());
        assert!(multipartite_lambda_star(4, 3).is_err());
    }

    #[test]
    fn lambda_star_edge_formula() {
        for n in (2..=12).step_by(2) {
            for k in 1..=n / 2 {
                let expected = binomial(n as u64, k as u64).unwrap() - 2 * binomial(n as u64 / 2, k as u64).unwrap();
                assert_eq!(multipartite_lambda_star(n, k).unwrap().edge_count() as u64, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn clique_cover_examples() {
        let complete = KUniformHypergraph::complete(6, 3);
        let cover = validate_clique_cover(&complete, &sliding_window_cover(6, 4)).unwrap();
        assert_eq!(cover.clique_size, 4);
        assert_eq!((cover.delta, cover.big_delta), (4, 4));

        let whole = validate_clique_cover(&complete, &[(0..6).collect()]).unwrap();
        assert_eq!((whole.clique_size, whole.delta, whole.big_delta), (6, 1, 1));

        let star = multipartite_lambda_star(4, 2).unwrap();
        assert_eq!(validate_clique_cover(&star, &[vec![0, 1, 2]]), Err(CoverError::MissingEdge { index: 1, witness: vec![1, 2] }));
    }

    #[test]
    fn clique_cover_errors() {
        let complete = KUniformHypergraph::complete(5, 2);
        assert_eq!(validate_clique_cover(&complete, &[]), Err(CoverError::Empty));
        assert!(matches!(validate_clique_cover(&complete, &[vec![0, 1, 2], vec![3, 4]]), Err(CoverError::NonUniform { index: 2, .. })));
        assert_eq!(validate_clique_cover(&complete, &[vec![0, 1, 2]]), Err(CoverError::Uncovered { vertex: 4 }));
        assert!(matches!(validate_clique_cover(&complete, &[vec![0]]), Err(CoverError::TooSmall { .. })));
        assert!(matches!(validate_clique_cover(&complete, &[vec![0, 0]]), Err(CoverError::BadVertices { .. })));
    }

    #[test]
    fn max_clique_of_lambda_star() {
        let limits = Limits::default();
        for n in (4..=8).step_by(2) {
            let g = multipartite_lambda_star(n, 2).unwrap();
            assert_eq!(max_clique(&g, &limits).unwrap().len(), 2, "n={n}");
        }
        for n in [6, 8, 10] {
            let g = multipartite_lambda_star(n, 3).unwrap();
            assert_eq!(max_clique(&g, &limits).unwrap().len(), 4, "n={n}");
        }
        assert_eq!(max_clique(&KUniformHypergraph::complete(7, 3), &limits).unwrap().len(), 7);
        let tight = Limits { enumeration_cap: 5, ..Limits::default() };
        assert!(max_clique(&KUniformHypergraph::complete(7, 3), &tight).is_err());
    }

    #[test]
    fn text_and_json_forms() {
        let g = multipartite_lambda_star(4, 2).unwrap();
        assert_eq!(g.to_edge_list(), "1 3\n1 4\n2 3\n2 4\n");
        assert_eq!(KUniformHypergraph::parse_edge_list(4, 2, &g.to_edge_list()).unwrap(), g);
        assert_eq!(KUniformHypergraph::parse_edge_list(4, 2, "1,3\n\n2, 4\n").unwrap().edge_count(), 2);
        assert!(matches!(KUniformHypergraph::parse_edge_list(4, 2, "1 3\n3 1\n"), Err(Error::Parse { position: 2, .. })));
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":4,"k":2,"edges":[[1,3],[1,4],[2,3],[2,4]]}"#);
        assert_eq!(serde_json::from_str::<KUniformHypergraph>(&json).unwrap(), g);
    }

    #[test]
    fn degrees() {
        let hist = degree_histogram(&multipartite_lambda_star(4, 2).unwrap());
        assert_eq!(hist, BTreeMap::from([(2, 4)]));
    }
}
