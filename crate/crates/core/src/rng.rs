//! Seeded random streams.
//!
//! All randomness goes through [`SeededRng`], which is ChaCha8 seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. ChaCha output is specified bit for bit,
//! so a seed produces the same values on every platform.
//!
//! Parallel work is split into fixed-size batches. Batch `i` draws from
//! stream `i` of the seed (`set_stream(i)`), so results do not depend on how
//! many worker threads run or on the order in which batches finish.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Number of trials drawn from one sub-stream.
pub const BATCH_SIZE: usize = 4096;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent deterministic sub-stream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `trials` into `(stream index, batch length)` pairs.
pub fn batches(trials: usize) -> Vec<(u64, usize)> {
    (0..trials.div_ceil(BATCH_SIZE))
        .map(|b| {
            let start = b * BATCH_SIZE;
            (b as u64, BATCH_SIZE.min(trials - start))
        })
        .collect()
}
