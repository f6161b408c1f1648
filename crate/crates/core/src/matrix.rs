//! 0-1 matrices and permutation-matrix pattern counting.
//!
//! Text format: a header line `rows cols`, then one line per row of
//! contiguous `0`/`1` characters. JSON mirrors it as
//! `{"rows": r, "cols": c, "data": ["0110", …]}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::serialize_rational;
use crate::rng;

const WORD: usize = 64;

/// A rows×cols 0-1 matrix, bit-packed row-major, with a cached count of ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    ones: u64,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD);
        BinaryMatrix { rows, cols, words_per_row, bits: vec![0; rows * words_per_row], ones: 0 }
    }

    /// The all-ones matrix.
    pub fn filled(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Builds from row strings of `0`/`1` characters.
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::parse(i, format!("row {} has length {}, expected {cols}", i + 1, row.len())));
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => return Err(Error::parse(j, format!("row {}: unexpected character {other:?}", i + 1))),
                }
            }
        }
        Ok(m)
    }

    /// n×n matrix from the low n² bits of `mask`, bit `i·n + j` for entry (i, j).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n * n <= 64, "mask form needs n² ≤ 64");
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if mask >> (i * n + j) & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Inverse of [`BinaryMatrix::from_mask`].
    pub fn to_mask(&self) -> Option<u64> {
        if self.rows * self.cols > 64 {
            return None;
        }
        let mut mask = 0u64;
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                mask |= 1 << (i * self.cols + j);
            }
        }
        Some(mask)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of bounds");
        self.bits[i * self.words_per_row + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of bounds");
        let word = &mut self.bits[i * self.words_per_row + j / WORD];
        let bit = 1u64 << (j % WORD);
        let was = *word & bit != 0;
        match (was, value) {
            (false, true) => {
                *word |= bit;
                self.ones += 1;
            }
            (true, false) => {
                *word &= !bit;
                self.ones -= 1;
            }
            _ => {}
        }
    }

    /// Columns holding a 1 in row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let words = &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row];
        words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    w * WORD + b
                })
            })
        })
    }

    pub fn row_is_empty(&self, i: usize) -> bool {
        self.bits[i * self.words_per_row..(i + 1) * self.words_per_row].iter().all(|&w| w == 0)
    }

    /// The submatrix on the given (increasing) row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if self.get(i, j) {
                    out.set(a, b, true);
                }
            }
        }
        out
    }

    /// Reads σ back if this is a permutation matrix.
    pub fn as_permutation(&self) -> Option<Permutation> {
        if !self.is_square() || self.ones != self.rows as u64 {
            return None;
        }
        let values: Option<Vec<u32>> = (0..self.rows)
            .map(|i| {
                let mut it = self.row_ones(i);
                match (it.next(), it.next()) {
                    (Some(j), None) => Some(j as u32),
                    _ => None,
                }
            })
            .collect();
        Permutation::from_zero_based(values?).ok()
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect()).collect()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for row in self.row_strings() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    /// Parses the text format. Error positions are 1-based line numbers.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `rows cols` header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(1, format!("bad header {header:?}")))?;
        let [rows, cols] = dims[..] else {
            return Err(Error::parse(1, format!("header must be `rows cols`, found {header:?}")));
        };
        let mut m = Self::zeros(rows, cols);
        let mut seen = 0;
        for (lineno, line) in lines {
            let line = line.trim();
            if seen == rows {
                return Err(Error::parse(lineno + 1, "more rows than declared"));
            }
            if line.len() != cols {
                return Err(Error::parse(lineno + 1, format!("row has {} entries, expected {cols}", line.len())));
            }
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(seen, j, true),
                    other => return Err(Error::parse(lineno + 1, format!("unexpected character {other:?}"))),
                }
            }
            seen += 1;
        }
        if seen != rows {
            return Err(Error::parse(text.lines().count() + 1, format!("expected {rows} rows, found {seen}")));
        }
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl Serialize for BinaryMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { rows: self.rows, cols: self.cols, data: self.row_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.data.is_empty() && raw.rows == 0 {
            return Ok(BinaryMatrix::zeros(0, raw.cols));
        }
        let m = BinaryMatrix::from_row_strings(&raw.data).map_err(serde::de::Error::custom)?;
        if m.rows != raw.rows || m.cols != raw.cols {
            return Err(serde::de::Error::custom("declared dimensions do not match data"));
        }
        Ok(m)
    }
}

/// P_σ: a 1 at (i, σ(i)) for every i.
pub fn permutation_matrix(sigma: &Permutation) -> BinaryMatrix {
    let n = sigma.len();
    let mut m = BinaryMatrix::zeros(n, n);
    for (i, &v) in sigma.values().iter().enumerate() {
        m.set(i, v as usize, true);
    }
    m
}

/// Counts (or, with `first_only`, detects) copies of A_π.
///
/// For each k-set of nonempty rows x₁ < ⋯ < x_k, the row that must carry
/// the 1 in the j-th smallest selected column is x_{π⁻¹(j)}; increasing
/// column tuples are then counted with a left-to-right sweep over columns.
fn copies_impl(a: &BinaryMatrix, pi: &Permutation, first_only: bool) -> u64 {
    let k = pi.len();
    if k == 0 {
        return 1;
    }
    let live: Vec<usize> = (0..a.rows).filter(|&i| !a.row_is_empty(i)).collect();
    if live.len() < k || a.cols < k {
        return 0;
    }
    let inverse = pi.inverse();
    let mut total = 0u64;
    let mut ways = vec![0u64; k + 1];
    let mut by_rank = vec![0usize; k];
    for subset in Combinations::new(live.len(), k) {
        for (j, slot) in by_rank.iter_mut().enumerate() {
            *slot = live[subset[inverse.values()[j] as usize]];
        }
        ways.iter_mut().for_each(|w| *w = 0);
        ways[0] = 1;
        for c in 0..a.cols {
            for j in (0..k).rev() {
                if ways[j] != 0 && a.get(by_rank[j], c) {
                    ways[j + 1] += ways[j];
                }
            }
        }
        total = total.checked_add(ways[k]).expect("copy count overflows u64");
        if first_only && total > 0 {
            return total;
        }
    }
    total
}

/// Number of copies of A_π in `a`: pairs of a row k-set and a column k-set
/// whose induced k×k submatrix has a 1 wherever A_π does.
pub fn count_matrix_copies(a: &BinaryMatrix, pi: &Permutation) -> u64 {
    copies_impl(a, pi, false)
}

/// True iff `a` contains the pattern `p`, which must be a permutation matrix.
pub fn matrix_contains(a: &BinaryMatrix, p: &BinaryMatrix) -> Result<bool> {
    let pi = p.as_permutation().ok_or_else(|| Error::InvalidArgument("pattern must be a permutation matrix".into()))?;
    Ok(contains_pattern(a, &pi))
}

pub fn contains_pattern(a: &BinaryMatrix, pi: &Permutation) -> bool {
    copies_impl(a, pi, true) > 0
}

/// Exact densities 1(M) and π(M).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityPair {
    #[serde(serialize_with = "serialize_rational")]
    pub one_density: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub pi_density: BigRational,
}

fn ratio_or_zero(num: u64, den: u128) -> BigRational {
    if den == 0 {
        BigRational::from_integer(0.into())
    } else {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

fn placements(a: &BinaryMatrix, k: usize) -> u128 {
    let r = binomial(a.rows as u64, k as u64).expect("C(rows,k) fits u64") as u128;
    let c = binomial(a.cols as u64, k as u64).expect("C(cols,k) fits u64") as u128;
    r * c
}

/// 1(M) = ones/(rows·cols) and π(M) = copies/(C(rows,k)·C(cols,k)); each is
/// 0 when its denominator vanishes.
pub fn densities(a: &BinaryMatrix, pi: &Permutation) -> DensityPair {
    DensityPair {
        one_density: ratio_or_zero(a.ones, (a.rows * a.cols) as u128),
        pi_density: ratio_or_zero(count_matrix_copies(a, pi), placements(a, pi.len())),
    }
}

/// Uniform r×r submatrix: an r-subset of rows and, independently, an r-subset
/// of columns.
pub fn random_submatrix<R: Rng + ?Sized>(a: &BinaryMatrix, r: usize, rng: &mut R) -> Result<BinaryMatrix> {
    if r > a.rows || r > a.cols {
        return Err(Error::InvalidArgument(format!("submatrix side {r} exceeds matrix dimensions {}×{}", a.rows, a.cols)));
    }
    let mut rows = rand::seq::index::sample(rng, a.rows, r).into_vec();
    let mut cols = rand::seq::index::sample(rng, a.cols, r).into_vec();
    rows.sort_unstable();
    cols.sort_unstable();
    Ok(a.submatrix(&rows, &cols))
}

/// Sample means of 1(R) and π(R) over random r×r submatrices R.
///
/// Means are exact rationals: each trial contributes an integer numerator
/// over a fixed denominator, so the result does not depend on summation order.
#[derive(Debug, Clone, Serialize)]
pub struct SamplingEstimate {
    pub r: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub mean_one: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub mean_pi: BigRational,
    pub se_one: f64,
    pub se_pi: f64,
    pub exact: DensityPair,
}

#[derive(Default, Clone, Copy)]
struct Moments {
    sum: u128,
    sum_sq: u128,
}

impl Moments {
    fn push(&mut self, x: u64) {
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
    }

    fn merge(self, other: Moments) -> Moments {
        Moments { sum: self.sum + other.sum, sum_sq: self.sum_sq + other.sum_sq }
    }

    /// Standard error of the mean of x/den.
    fn std_error(&self, trials: usize, den: u128) -> f64 {
        if trials < 2 || den == 0 {
            return 0.0;
        }
        let t = trials as f64;
        let mean = self.sum as f64 / t;
        let var = ((self.sum_sq as f64 - t * mean * mean) / (t - 1.0)).max(0.0);
        (var / t).sqrt() / den as f64
    }
}

/// Runs `trials` independent submatrix draws. Batch `b` uses sub-stream `b`
/// of `seed` (see [`crate::rng`]).
pub fn sampling_estimates(a: &BinaryMatrix, pi: &Permutation, r: usize, trials: usize, seed: u64) -> Result<SamplingEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if r > a.rows || r > a.cols {
        return Err(Error::InvalidArgument(format!("submatrix side {r} exceeds matrix dimensions {}×{}", a.rows, a.cols)));
    }
    let (ones, copies) = rng::batches(trials)
        .into_par_iter()
        .map(|(stream, len)| {
            let mut g = rng::substream(seed, stream);
            let mut ones = Moments::default();
            let mut copies = Moments::default();
            for _ in 0..len {
                let sub = random_submatrix(a, r, &mut g).expect("side checked above");
                ones.push(sub.ones());
                copies.push(count_matrix_copies(&sub, pi));
            }
            (ones, copies)
        })
        .reduce(|| (Moments::default(), Moments::default()), |x, y| (x.0.merge(y.0), x.1.merge(y.1)));
    let one_den = (r * r) as u128;
    let pi_den = binomial(r as u64, pi.len() as u64).expect("fits") as u128;
    let pi_den = pi_den * pi_den;
    let mean = |m: &Moments, den: u128| {
        if den == 0 {
            BigRational::from_integer(0.into())
        } else {
            BigRational::new(BigInt::from(m.sum), BigInt::from(den) * BigInt::from(trials))
        }
    };
    Ok(SamplingEstimate {
        r,
        trials,
        seed,
        mean_one: mean(&ones, one_den),
        mean_pi: mean(&copies, pi_den),
        se_one: ones.std_error(trials, one_den),
        se_pi: copies.std_error(trials, pi_den),
        exact: densities(a, pi),
    })
}
