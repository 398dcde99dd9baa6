//! Ring-LWE public-key encryption written from scratch, payload encryption
//! for ledger entries, and an exhaustive key-recovery harness.

mod attack;
mod params;
mod payload;
mod poly;
mod scheme;

use thiserror::Error;

pub use attack::{keyspace_size, simulate_quantum_attack, AttackOutcome, AttackReport};
pub use params::{ParamSet, RlweParams};
pub use payload::{block_count, decrypt_payload, encrypt_payload, HEADER_LEN, MAGIC};
pub use poly::{Poly, Ring};
pub use scheme::{decrypt, encrypt, keygen, PublicKey, RlweCiphertext, RlweKeyPair, SecretKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CryptoError {
    #[error("unregistered parameter set {0}")]
    UnregisteredParams(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("message has {got} bits, ring degree is {expected}")]
    MessageLengthMismatch { expected: usize, got: usize },
    #[error("key, ciphertext or blob belongs to a different parameter set")]
    ParamMismatch,
    #[error("malformed encrypted blob: {0}")]
    MalformedBlob(String),
}
