//! Pattern avoidance restricted to the edges of a hypergraph, together with
//! exact and Monte-Carlo expectations over random hypergraphs, 0-1 matrix
//! pattern counting, matrix contractions, extremal constructions and small
//! brute-force verifiers.
//!
//! Indexing: positions, values, vertices and matrix coordinates are 0-based
//! inside the library. Every text and JSON form (permutations, occurrences,
//! hypergraph edges, clique covers) is 1-based, matching one-line notation.

pub mod avoidance;
pub mod combin;
pub mod containers;
pub mod contraction;
pub mod error;
pub mod hypergraph;
pub mod limits;
pub mod matrix;
pub mod perm;
pub mod rational;
pub mod rng;
pub mod supersat;

pub use error::{Error, Result};
pub use hypergraph::KUniformHypergraph;
pub use limits::Limits;
pub use matrix::BinaryMatrix;
pub use perm::Permutation;
pub use rational::Probability;
