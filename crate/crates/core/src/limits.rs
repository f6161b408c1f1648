use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size limits for the exhaustive passes.
///
/// Every brute-force routine checks its input against one of these before
/// doing any work, so a misconfigured call fails fast instead of running for
/// hours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest n for which S_n is enumerated.
    pub enumeration_cap: usize,
    /// Largest side length for exhaustive n×n 0-1 matrix searches.
    pub matrix_cap: usize,
    /// Largest edge count allowed when building a grid pattern hypergraph.
    pub edge_ceiling: u64,
    /// Largest candidate-set count C(n², size) for independent-set counting.
    pub independent_ceiling: u64,
    /// Largest samples·n!·C(n,k) for the hypergraph-sampling estimator.
    pub lambda_cost_ceiling: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_cap: 12,
            matrix_cap: 4,
            edge_ceiling: 1_000_000,
            independent_ceiling: 100_000_000,
            lambda_cost_ceiling: 20_000_000_000,
        }
    }
}

impl Limits {
    pub fn check_enumeration(&self, n: usize) -> Result<()> {
        if n > self.enumeration_cap {
            return Err(Error::cap("permutation length", n as u128, self.enumeration_cap as u128));
        }
        Ok(())
    }

    pub fn check_matrix(&self, n: usize) -> Result<()> {
        if n > self.matrix_cap {
            return Err(Error::cap("matrix side", n as u128, self.matrix_cap as u128));
        }
        Ok(())
    }
}
