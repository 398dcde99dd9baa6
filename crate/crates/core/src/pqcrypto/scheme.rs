//! Ring-LWE public-key encryption of one `n`-bit block.
//!
//! Public key `(a, b = a*s + e)`. A message bit vector `m` encrypts to
//! `u = a*r + e1`, `v = b*r + e2 + floor(q/2)*m`; decryption rounds
//! `v - u*s` to the nearer of `0` and `floor(q/2)`.

use serde::{Deserialize, Serialize};

use super::params::RlweParams;
use super::poly::{center, Poly, Ring};
use super::CryptoError;
use crate::prng::Prng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicKey {
    #[serde(with = "poly_serde")]
    pub a: Poly,
    #[serde(with = "poly_serde")]
    pub b: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretKey {
    #[serde(with = "poly_serde")]
    pub s: Poly,
}

impl SecretKey {
    pub fn centered(&self) -> Vec<i64> {
        self.s.centered()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RlweKeyPair {
    pub params: RlweParams,
    pub public: PublicKey,
    pub secret: SecretKey,
}

impl RlweKeyPair {
    /// Assemble a key pair from explicit `a`, `s` and `e` (computes `b`).
    pub fn from_parts(params: RlweParams, a: Poly, s: Poly, e: &Poly) -> Self {
        let b = Ring::new(&params).mul(&a, &s).add(e);
        RlweKeyPair {
            params,
            public: PublicKey { a, b },
            secret: SecretKey { s },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RlweCiphertext {
    pub params: RlweParams,
    #[serde(with = "poly_serde")]
    pub u: Poly,
    #[serde(with = "poly_serde")]
    pub v: Poly,
}

/// Draws `a` uniform, then `s` and `e` centered-binomial, in that order.
pub fn keygen(params: &RlweParams, prng: &mut Prng) -> Result<RlweKeyPair, CryptoError> {
    params.check()?;
    let (n, q, eta) = (params.n(), params.q(), params.eta());
    let a = Poly::sample_uniform(n, q, prng);
    let s = Poly::sample_cbd(n, q, eta, prng);
    let e = Poly::sample_cbd(n, q, eta, prng);
    Ok(RlweKeyPair::from_parts(*params, a, s, &e))
}

pub fn encrypt(
    public: &PublicKey,
    params: &RlweParams,
    message: &[bool],
    prng: &mut Prng,
) -> Result<RlweCiphertext, CryptoError> {
    encrypt_in(&Ring::new(params), public, params, message, prng)
}

pub(crate) fn encrypt_in(
    ring: &Ring,
    public: &PublicKey,
    params: &RlweParams,
    message: &[bool],
    prng: &mut Prng,
) -> Result<RlweCiphertext, CryptoError> {
    let (n, q, eta) = (params.n(), params.q(), params.eta());
    if message.len() != n {
        return Err(CryptoError::MessageLengthMismatch {
            expected: n,
            got: message.len(),
        });
    }
    if public.a.n() != n || public.a.q() != q {
        return Err(CryptoError::ParamMismatch);
    }
    let r = Poly::sample_cbd(n, q, eta, prng);
    let e1 = Poly::sample_cbd(n, q, eta, prng);
    let e2 = Poly::sample_cbd(n, q, eta, prng);
    let encoded = Poly::from_coeffs(message.iter().map(|&bit| u32::from(bit)), q).scale(params.half_q());
    let u = ring.mul(&public.a, &r).add(&e1);
    let v = ring.mul(&public.b, &r).add(&e2).add(&encoded);
    Ok(RlweCiphertext { params: *params, u, v })
}

pub fn decrypt(secret: &SecretKey, params: &RlweParams, ct: &RlweCiphertext) -> Result<Vec<bool>, CryptoError> {
    decrypt_in(&Ring::new(params), secret, params, ct)
}

pub(crate) fn decrypt_in(
    ring: &Ring,
    secret: &SecretKey,
    params: &RlweParams,
    ct: &RlweCiphertext,
) -> Result<Vec<bool>, CryptoError> {
    if ct.params != *params || secret.s.n() != params.n() || secret.s.q() != params.q() {
        return Err(CryptoError::ParamMismatch);
    }
    let d = ct.v.sub(&ring.mul(&ct.u, &secret.s));
    Ok(decode(&d, params))
}

/// Bit `i` is one when coefficient `i` sits closer to `floor(q/2)` than to 0.
pub(crate) fn decode(d: &Poly, params: &RlweParams) -> Vec<bool> {
    d.coeffs().iter().map(|&c| decode_coeff(c, params.q())).collect()
}

pub(crate) fn decode_coeff(c: u32, q: u32) -> bool {
    let half = i64::from(q / 2);
    let to_zero = center(c, q).abs();
    let to_half = (i64::from(c) - half).abs();
    to_half < to_zero
}

mod poly_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Poly;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        q: u32,
        coeffs: Vec<u32>,
    }

    pub fn serialize<S: Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            q: p.q(),
            coeffs: p.coeffs().to_vec(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Poly, D::Error> {
        let r = Repr::deserialize(d)?;
        if r.q < 2 || r.coeffs.iter().any(|&c| c >= r.q) {
            return Err(serde::de::Error::custom("coefficient out of range"));
        }
        Ok(Poly::from_coeffs(r.coeffs, r.q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::derive_stream;

    fn noiseless() -> RlweParams {
        RlweParams::custom(4, 257, 0).unwrap()
    }

    #[test]
    fn keygen_is_deterministic() {
        let p = RlweParams::std256();
        let k1 = keygen(&p, &mut derive_stream(7, "keygen")).unwrap();
        let k2 = keygen(&p, &mut derive_stream(7, "keygen")).unwrap();
        assert_eq!(k1, k2);
        let k3 = keygen(&p, &mut derive_stream(8, "keygen")).unwrap();
        assert_ne!(k1, k3);
    }

    #[test]
    fn noiseless_keys_are_zero() {
        let k = keygen(&noiseless(), &mut derive_stream(1, "k")).unwrap();
        assert!(k.secret.s.is_zero());
        assert!(k.public.b.is_zero());
    }

    #[test]
    fn noiseless_encryption() {
        let p = noiseless();
        let k = keygen(&p, &mut derive_stream(1, "k")).unwrap();
        let zero = encrypt(&k.public, &p, &[false; 4], &mut derive_stream(1, "e")).unwrap();
        assert!(zero.u.is_zero() && zero.v.is_zero());
        let m = [true, false, true, true];
        let ct = encrypt(&k.public, &p, &m, &mut derive_stream(1, "e")).unwrap();
        assert_eq!(ct.v.coeffs(), &[128, 0, 128, 128]);
        assert_eq!(decrypt(&k.secret, &p, &ct).unwrap(), m);
    }

    #[test]
    fn message_length_checked() {
        let p = RlweParams::toy4();
        let k = keygen(&p, &mut derive_stream(1, "k")).unwrap();
        assert_eq!(
            encrypt(&k.public, &p, &[true; 3], &mut derive_stream(1, "e")),
            Err(CryptoError::MessageLengthMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn param_mismatch_on_decrypt() {
        let p = RlweParams::toy4();
        let k = keygen(&p, &mut derive_stream(1, "k")).unwrap();
        let ct = encrypt(&k.public, &p, &[true; 4], &mut derive_stream(1, "e")).unwrap();
        let other = RlweParams::toy8();
        assert_eq!(decrypt(&k.secret, &other, &ct), Err(CryptoError::ParamMismatch));
    }

    #[test]
    fn shifting_v_flips_a_bit() {
        let p = RlweParams::std256();
        let k = keygen(&p, &mut derive_stream(2, "k")).unwrap();
        let m: Vec<bool> = (0..256).map(|i| i % 3 == 0).collect();
        let mut ct = encrypt(&k.public, &p, &m, &mut derive_stream(2, "e")).unwrap();
        let mut shift = vec![0u32; 256];
        shift[0] = p.half_q();
        ct.v = ct.v.add(&Poly::from_coeffs(shift, p.q()));
        let out = decrypt(&k.secret, &p, &ct).unwrap();
        assert_eq!(out[0], !m[0]);
        assert_eq!(out[1..], m[1..]);
    }

    #[test]
    fn decode_boundaries() {
        // q = 17, floor(q/2) = 8, decoding radius 3.
        for noise in -3i64..=3 {
            let zero = noise.rem_euclid(17) as u32;
            let one = (8 + noise).rem_euclid(17) as u32;
            assert!(!decode_coeff(zero, 17), "noise {noise}");
            assert!(decode_coeff(one, 17), "noise {noise}");
        }
    }

    #[test]
    fn key_json_round_trip() {
        let k = keygen(&RlweParams::toy8(), &mut derive_stream(3, "k")).unwrap();
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(serde_json::from_str::<RlweKeyPair>(&json).unwrap(), k);
    }
}
