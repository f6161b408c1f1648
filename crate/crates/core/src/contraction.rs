//! Block contractions of 0-1 matrices.
//!
//! Both contractions OR the entries of aligned blocks, so any copy of A_π in
//! the contracted matrix lifts to at least one copy in the original.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::rational::parse_rational;

/// Exact contraction factor b = p/q ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionFactor {
    p: u64,
    q: u64,
}

impl ContractionFactor {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p < q {
            return Err(Error::InvalidArgument(format!("contraction factor {p}/{q} must be at least 1")));
        }
        let g = num_integer::gcd(p, q);
        Ok(ContractionFactor { p: p / g, q: q / g })
    }

    pub fn integer(b: u64) -> Result<Self> {
        Self::new(b, 1)
    }

    /// Parses `p/q` or an integer.
    pub fn parse(text: &str) -> Result<Self> {
        let r = parse_rational(text)?;
        use num_traits::ToPrimitive;
        let (p, q) = r
            .numer()
            .to_u64()
            .zip(r.denom().to_u64())
            .ok_or_else(|| Error::InvalidArgument(format!("contraction factor {text:?} must be a positive rational")))?;
        Self::new(p, q)
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    /// ⌈i/b⌉ = ⌈i·q/p⌉ for a 1-based index i.
    pub fn group(&self, i: u64) -> u64 {
        (i * self.q).div_ceil(self.p)
    }

    /// ⌈n/b⌉.
    pub fn contracted_len(&self, n: usize) -> usize {
        self.group(n as u64) as usize
    }
}

impl std::fmt::Display for ContractionFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

/// n/2 × n/2 matrix whose (i, j) entry is 1 iff the 2×2 block at rows
/// 2i, 2i+1 and columns 2j, 2j+1 has a 1. Needs even dimensions.
pub fn contract2(m: &BinaryMatrix) -> Result<BinaryMatrix> {
    if !m.rows().is_multiple_of(2) || !m.cols().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("2-contraction needs even dimensions, got {}×{}", m.rows(), m.cols())));
    }
    let mut out = BinaryMatrix::zeros(m.rows() / 2, m.cols() / 2);
    for i in 0..m.rows() {
        for j in m.row_ones(i) {
            out.set(i / 2, j / 2, true);
        }
    }
    Ok(out)
}

/// ⌈n/b⌉-sided matrix; source row i′ (1-based) lands in group ⌈i′/b⌉, and a
/// group cell is 1 iff any source entry in its rectangle is 1.
pub fn contract_b(m: &BinaryMatrix, b: ContractionFactor) -> BinaryMatrix {
    let mut out = BinaryMatrix::zeros(b.contracted_len(m.rows()), b.contracted_len(m.cols()));
    for i in 0..m.rows() {
        let gi = b.group(i as u64 + 1) as usize - 1;
        for j in m.row_ones(i) {
            out.set(gi, b.group(j as u64 + 1) as usize - 1, true);
        }
    }
    out
}

/// Number of matrices whose 2-contraction is `target`: each 1 comes from one
/// of the 15 nonzero 2×2 blocks, each 0 from the zero block.
pub fn preimage_count_contract2(target: &BinaryMatrix) -> BigUint {
    BigUint::from(15u32).pow(target.ones() as u32)
}
