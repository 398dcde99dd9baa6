//! Reference computations written against the raw primitives, independent
//! of the library's own arithmetic.
#![allow(dead_code)]

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub fn stream(seed: u64, label: &str) -> ChaCha20Rng {
    let mut h = Sha256::new();
    h.update(seed.to_be_bytes());
    h.update(label.as_bytes());
    ChaCha20Rng::from_seed(h.finalize().into())
}

pub fn reduce(x: i64, q: i64) -> i64 {
    x.rem_euclid(q)
}

pub fn centered(x: i64, q: i64) -> i64 {
    let x = reduce(x, q);
    if x > q / 2 {
        x - q
    } else {
        x
    }
}

/// Product in Z_q[x]/(x^n + 1) by the textbook double loop.
pub fn negacyclic_mul(a: &[i64], b: &[i64], q: i64) -> Vec<i64> {
    let n = a.len();
    let mut out = vec![0i64; n];
    for i in 0..n {
        for j in 0..n {
            let k = i + j;
            let p = a[i] * b[j];
            if k < n {
                out[k] += p;
            } else {
                out[k - n] -= p;
            }
        }
    }
    out.into_iter().map(|c| reduce(c, q)).collect()
}

pub fn add(a: &[i64], b: &[i64], q: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| reduce(x + y, q)).collect()
}

pub fn sub(a: &[i64], b: &[i64], q: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| reduce(x - y, q)).collect()
}

pub fn uniform(rng: &mut ChaCha20Rng, n: usize, q: u32) -> Vec<i64> {
    (0..n).map(|_| i64::from(rng.random_range(0..q))).collect()
}

pub fn cbd(rng: &mut ChaCha20Rng, n: usize, eta: u32) -> Vec<i64> {
    if eta == 0 {
        return vec![0; n];
    }
    (0..n)
        .map(|_| {
            let w = rng.next_u64();
            let mut plus = 0;
            let mut minus = 0;
            for k in 0..eta {
                plus += (w >> k) & 1;
                minus += (w >> (32 + k)) & 1;
            }
            plus as i64 - minus as i64
        })
        .collect()
}

pub struct OracleKeys {
    pub a: Vec<i64>,
    pub s: Vec<i64>,
    pub e: Vec<i64>,
    pub b: Vec<i64>,
}

pub fn keygen(rng: &mut ChaCha20Rng, n: usize, q: u32, eta: u32) -> OracleKeys {
    let qi = i64::from(q);
    let a = uniform(rng, n, q);
    let s = cbd(rng, n, eta);
    let e = cbd(rng, n, eta);
    let b = add(&negacyclic_mul(&a, &s, qi), &e, qi);
    OracleKeys { a, s, e, b }
}

pub fn encrypt(rng: &mut ChaCha20Rng, keys: &OracleKeys, m: &[bool], q: u32, eta: u32) -> (Vec<i64>, Vec<i64>) {
    let n = m.len();
    let qi = i64::from(q);
    let r = cbd(rng, n, eta);
    let e1 = cbd(rng, n, eta);
    let e2 = cbd(rng, n, eta);
    let u = add(&negacyclic_mul(&keys.a, &r, qi), &e1, qi);
    let msg: Vec<i64> = m.iter().map(|&bit| if bit { qi / 2 } else { 0 }).collect();
    let v = add(&add(&negacyclic_mul(&keys.b, &r, qi), &e2, qi), &msg, qi);
    (u, v)
}

/// `|d - floor(q/2)| < |d|`, both in centered form.
pub fn decode(d: &[i64], q: u32) -> Vec<bool> {
    let qi = i64::from(q);
    d.iter()
        .map(|&c| centered(c - qi / 2, qi).abs() < centered(c, qi).abs())
        .collect()
}

pub fn ledger_hash(
    index: u64,
    timestamp: u64,
    event_code: u8,
    encrypted: bool,
    payload: &[u8],
    prev: &[u8; 32],
) -> [u8; 32] {
    let mut bytes = Vec::new();
    bytes.extend_from_slice(&index.to_be_bytes());
    bytes.extend_from_slice(&timestamp.to_be_bytes());
    bytes.push(event_code);
    bytes.push(encrypted as u8);
    bytes.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    bytes.extend_from_slice(payload);
    bytes.extend_from_slice(prev);
    Sha256::digest(&bytes).into()
}

pub fn as_i64(coeffs: &[u32]) -> Vec<i64> {
    coeffs.iter().map(|&c| i64::from(c)).collect()
}

pub mod ledger {
    use pqpt::ledger::{EventType, LedgerEntry, VerificationOutcome, ViolationKind};
    use rand::Rng;

    /// First broken entry, found by recomputing every hash from the raw layout.
    pub fn locate(entries: &[LedgerEntry]) -> VerificationOutcome {
        let mut prev = [0u8; 32];
        for (i, e) in entries.iter().enumerate() {
            let kind = if e.index != i as u64 {
                Some(ViolationKind::IndexGap)
            } else if e.prev_hash != prev {
                Some(ViolationKind::LinkMismatch)
            } else if super::ledger_hash(e.index, e.timestamp, e.event_type.code(), e.payload_encrypted, &e.payload, &e.prev_hash)
                != e.entry_hash
            {
                Some(ViolationKind::HashMismatch)
            } else {
                None
            };
            if let Some(kind) = kind {
                return VerificationOutcome::Violation { index: i as u64, kind };
            }
            prev = e.entry_hash;
        }
        VerificationOutcome::Valid
    }

    /// Flip one bit of one stored field of one random entry; returns its index.
    pub fn flip_random_bit(entries: &mut [LedgerEntry], rng: &mut impl Rng) -> usize {
        let i = rng.random_range(0..entries.len());
        let e = &mut entries[i];
        loop {
            let bit = rng.random_range(0..8u32);
            match rng.random_range(0..7) {
                0 => e.index ^= 1 << rng.random_range(0..64),
                1 => e.timestamp ^= 1 << rng.random_range(0..64),
                2 => {
                    let others: Vec<_> = EventType::ALL.into_iter().filter(|&t| t != e.event_type).collect();
                    e.event_type = others[rng.random_range(0..others.len())];
                }
                3 if !e.payload.is_empty() => {
                    let k = rng.random_range(0..e.payload.len());
                    e.payload[k] ^= 1 << bit;
                }
                4 => e.payload_encrypted = !e.payload_encrypted,
                5 => e.prev_hash[rng.random_range(0..32)] ^= 1 << bit,
                6 => e.entry_hash[rng.random_range(0..32)] ^= 1 << bit,
                _ => continue,
            }
            return i;
        }
    }
}
