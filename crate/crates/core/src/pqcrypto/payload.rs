//! Byte-payload encryption over RLWE blocks.
//!
//! Wire format, all integers big-endian:
//!
//! ```text
//! "RLWE" | params wire id (u8) | payload length (u64) | block count (u32) |
//! block* where block = u coefficients (n x u16) then v coefficients (n x u16)
//! ```
//!
//! Payload bits are taken most-significant first and zero-padded to a whole
//! number of `n`-bit blocks; the length in the header recovers the original.

use super::params::RlweParams;
use super::poly::{Poly, Ring};
use super::scheme::{decrypt_in, encrypt_in, PublicKey, RlweCiphertext, SecretKey};
use super::CryptoError;
use crate::prng::Prng;

pub const MAGIC: &[u8; 4] = b"RLWE";
pub const HEADER_LEN: usize = 4 + 1 + 8 + 4;

/// Number of ciphertext blocks for a payload of `len` bytes.
pub fn block_count(params: &RlweParams, len: usize) -> usize {
    (len * 8).div_ceil(params.n())
}

fn wire_id(params: &RlweParams) -> Result<u8, CryptoError> {
    match params.set().wire_id() {
        Some(id) if params.is_correct() => Ok(id),
        _ => Err(CryptoError::UnregisteredParams(params.to_string())),
    }
}

pub fn encrypt_payload(
    public: &PublicKey,
    params: &RlweParams,
    payload: &[u8],
    prng: &mut Prng,
) -> Result<Vec<u8>, CryptoError> {
    let id = wire_id(params)?;
    let n = params.n();
    let blocks = block_count(params, payload.len());
    let blocks_u32 = u32::try_from(blocks).map_err(|_| CryptoError::MalformedBlob("payload too large".into()))?;
    let ring = Ring::new(params);

    let mut out = Vec::with_capacity(HEADER_LEN + blocks * n * 4);
    out.extend_from_slice(MAGIC);
    out.push(id);
    out.extend_from_slice(&(payload.len() as u64).to_be_bytes());
    out.extend_from_slice(&blocks_u32.to_be_bytes());

    let bit = |i: usize| payload.get(i / 8).is_some_and(|b| b >> (7 - i % 8) & 1 == 1);
    for block in 0..blocks {
        let message: Vec<bool> = (0..n).map(|j| bit(block * n + j)).collect();
        let ct = encrypt_in(&ring, public, params, &message, prng)?;
        for c in ct.u.coeffs().iter().chain(ct.v.coeffs()) {
            out.extend_from_slice(&(*c as u16).to_be_bytes());
        }
    }
    Ok(out)
}

pub fn decrypt_payload(secret: &SecretKey, params: &RlweParams, blob: &[u8]) -> Result<Vec<u8>, CryptoError> {
    let malformed = |why: &str| CryptoError::MalformedBlob(why.to_string());
    if blob.len() < HEADER_LEN {
        return Err(malformed("truncated header"));
    }
    if &blob[..4] != MAGIC {
        return Err(malformed("bad magic"));
    }
    let blob_params = RlweParams::from_wire_id(blob[4]).map_err(|_| malformed("unknown params id"))?;
    if blob_params != *params {
        return Err(CryptoError::ParamMismatch);
    }
    let len = u64::from_be_bytes(blob[5..13].try_into().expect("8 bytes"));
    let blocks = u32::from_be_bytes(blob[13..17].try_into().expect("4 bytes")) as usize;
    let len = usize::try_from(len).map_err(|_| malformed("length overflow"))?;
    if len.checked_mul(8).is_none() || block_count(params, len) != blocks {
        return Err(malformed("block count does not match payload length"));
    }
    let n = params.n();
    let block_bytes = n * 4;
    if blob.len() - HEADER_LEN != blocks * block_bytes {
        return Err(malformed("body length does not match block count"));
    }

    let ring = Ring::new(params);
    let q = params.q();
    let mut out = vec![0u8; len];
    for (b, chunk) in blob[HEADER_LEN..].chunks_exact(block_bytes).enumerate() {
        let coeffs: Vec<u32> = chunk
            .chunks_exact(2)
            .map(|c| u32::from(u16::from_be_bytes([c[0], c[1]])))
            .collect();
        if coeffs.iter().any(|&c| c >= q) {
            return Err(malformed("coefficient out of range"));
        }
        let ct = RlweCiphertext {
            params: *params,
            u: Poly::from_coeffs(coeffs[..n].iter().copied(), q),
            v: Poly::from_coeffs(coeffs[n..].iter().copied(), q),
        };
        let bits = decrypt_in(&ring, secret, params, &ct)?;
        for (j, bit) in bits.into_iter().enumerate() {
            let i = b * n + j;
            if bit && i / 8 < len {
                out[i / 8] |= 1 << (7 - i % 8);
            }
        }
    }
    Ok(out)
}
