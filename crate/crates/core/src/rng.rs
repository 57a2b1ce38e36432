//! Reproducible RNG substreams.
//!
//! Every stochastic component (bootstrap replications, synthetic data
//! generation, coverage trials) draws from a ChaCha12 stream whose key is
//! derived by hashing a user seed together with a small integer path such as
//! `(replication, stratum)`. Streams therefore depend only on `(seed, path)`,
//! never on execution order, which is what makes parallel runs bitwise
//! reproducible at any worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

const DOMAIN: &[u8] = b"voucherkit.substream.v1";

/// Derive the deterministic RNG for `(seed, path)`.
pub fn substream(seed: u64, path: &[u64]) -> ChaCha12Rng {
    let mut hasher = Sha256::new();
    hasher.update(DOMAIN);
    hasher.update(seed.to_le_bytes());
    hasher.update((path.len() as u64).to_le_bytes());
    for part in path {
        hasher.update(part.to_le_bytes());
    }
    ChaCha12Rng::from_seed(hasher.finalize().into())
}
