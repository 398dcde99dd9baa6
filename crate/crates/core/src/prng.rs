//! Deterministic, splittable random streams.
//!
//! Every stochastic step in the crate draws from a [`Prng`] obtained through
//! [`derive_stream`]. A stream is a ChaCha20 generator whose 256-bit key is
//! `SHA-256(master_seed as 8-byte big-endian || stream_label)`, so the output
//! depends only on the two inputs and is identical on every platform.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// A single-owner pseudo-random stream.
///
/// Implements [`RngCore`], so it plugs into the `rand` sampling APIs.
#[derive(Clone, Debug)]
pub struct Prng {
    master_seed: u64,
    label: Vec<u8>,
    rng: ChaCha20Rng,
}

/// Derive the stream identified by `(master_seed, stream_label)`.
pub fn derive_stream(master_seed: u64, stream_label: impl AsRef<[u8]>) -> Prng {
    let label = stream_label.as_ref().to_vec();
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_be_bytes());
    hasher.update(&label);
    let key: [u8; 32] = hasher.finalize().into();
    Prng {
        master_seed,
        label,
        rng: ChaCha20Rng::from_seed(key),
    }
}

impl Prng {
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn label(&self) -> &[u8] {
        &self.label
    }

    /// Child stream labelled `<parent label>/<child>`. Does not advance `self`.
    pub fn substream(&self, child: impl AsRef<[u8]>) -> Prng {
        let mut label = self.label.clone();
        label.push(b'/');
        label.extend_from_slice(child.as_ref());
        derive_stream(self.master_seed, label)
    }

    /// Uniform `f64` in `[0, 1)` with 53 bits of precision.
    pub fn next_unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for Prng {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
