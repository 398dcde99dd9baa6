//! Arithmetic in `Z_q[x]/(x^n + 1)`.
//!
//! Schoolbook multiplication is the reference; [`Ring::mul`] takes the
//! negacyclic NTT path whenever `q = 1 mod 2n` and must agree with it exactly.

use rand::{Rng, RngCore};

use super::params::RlweParams;
use crate::prng::Prng;

/// Ring element with coefficients in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u32>,
    q: u32,
}

impl Poly {
    pub fn zero(n: usize, q: u32) -> Self {
        Poly { coeffs: vec![0; n], q }
    }

    /// Reduces every coefficient into `[0, q)`.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = u32>, q: u32) -> Self {
        Poly {
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
            q,
        }
    }

    /// From signed (centered) coefficients.
    pub fn from_signed(coeffs: impl IntoIterator<Item = i64>, q: u32) -> Self {
        Poly {
            coeffs: coeffs.into_iter().map(|c| c.rem_euclid(i64::from(q)) as u32).collect(),
            q,
        }
    }

    /// `x^k` in the ring of degree `n`.
    pub fn monomial(k: usize, n: usize, q: u32) -> Self {
        let mut p = Poly::zero(n, q);
        p.coeffs[k] = 1;
        p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Coefficients lifted to `(-q/2, q/2]`.
    pub fn centered(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| center(c, self.q)).collect()
    }

    /// Largest centered coefficient magnitude.
    pub fn infinity_norm(&self) -> u64 {
        self.centered().iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    fn assert_compatible(&self, other: &Poly) {
        assert_eq!(self.q, other.q, "modulus mismatch");
        assert_eq!(self.n(), other.n(), "degree mismatch");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_compatible(other);
        let q = self.q;
        Poly {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + b) % q).collect(),
            q,
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.assert_compatible(other);
        let q = self.q;
        Poly {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + q - b) % q).collect(),
            q,
        }
    }

    pub fn scale(&self, k: u32) -> Poly {
        let q = u64::from(self.q);
        Poly {
            coeffs: self.coeffs.iter().map(|&c| (u64::from(c) * u64::from(k) % q) as u32).collect(),
            q: self.q,
        }
    }

    /// O(n^2) negacyclic product; the reference every other multiplier is
    /// checked against.
    pub fn mul_schoolbook(&self, other: &Poly) -> Poly {
        self.assert_compatible(other);
        let n = self.n();
        let q = i64::from(self.q);
        let mut acc = vec![0i64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let prod = i64::from(a) * i64::from(b) % q;
                let k = i + j;
                if k < n {
                    acc[k] += prod;
                } else {
                    acc[k - n] -= prod;
                }
            }
        }
        Poly::from_signed(acc, self.q)
    }

    pub(crate) fn sample_uniform(n: usize, q: u32, prng: &mut Prng) -> Poly {
        Poly {
            coeffs: (0..n).map(|_| prng.random_range(0..q)).collect(),
            q,
        }
    }

    /// Centered binomial: popcount of `eta` bits minus popcount of `eta` bits.
    pub(crate) fn sample_cbd(n: usize, q: u32, eta: u32, prng: &mut Prng) -> Poly {
        if eta == 0 {
            return Poly::zero(n, q);
        }
        let mask = (1u64 << eta) - 1;
        let coeffs = (0..n).map(|_| {
            let bits = prng.next_u64();
            let pos = (bits & mask).count_ones() as i64;
            let neg = ((bits >> 32) & mask).count_ones() as i64;
            pos - neg
        });
        Poly::from_signed(coeffs, q)
    }
}

pub(crate) fn center(c: u32, q: u32) -> i64 {
    let c = i64::from(c);
    let q = i64::from(q);
    if c > q / 2 {
        c - q
    } else {
        c
    }
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Precomputed twiddles for the negacyclic NTT of length `n` modulo `q`.
#[derive(Debug, Clone)]
struct NttTables {
    q: u64,
    /// `psi^i` and `psi^-i`, `psi` a primitive 2n-th root of unity.
    psi_pow: Vec<u64>,
    psi_inv_pow: Vec<u64>,
    omega: u64,
    omega_inv: u64,
    n_inv: u64,
}

impl NttTables {
    fn new(n: usize, q: u32) -> Option<Self> {
        let q = u64::from(q);
        let two_n = 2 * n as u64;
        if (q - 1) % two_n != 0 {
            return None;
        }
        // psi has order exactly 2n iff psi^n = -1, since 2n is a power of two.
        let psi = (2..q)
            .map(|g| pow_mod(g, (q - 1) / two_n, q))
            .find(|&psi| pow_mod(psi, n as u64, q) == q - 1)?;
        let psi_inv = pow_mod(psi, q - 2, q);
        let mut psi_pow = Vec::with_capacity(n);
        let mut psi_inv_pow = Vec::with_capacity(n);
        let (mut p, mut pi) = (1u64, 1u64);
        for _ in 0..n {
            psi_pow.push(p);
            psi_inv_pow.push(pi);
            p = p * psi % q;
            pi = pi * psi_inv % q;
        }
        let omega = psi * psi % q;
        Some(NttTables {
            q,
            psi_pow,
            psi_inv_pow,
            omega,
            omega_inv: pow_mod(omega, q - 2, q),
            n_inv: pow_mod(n as u64, q - 2, q),
        })
    }

    fn cyclic(&self, a: &mut [u64], root: u64) {
        let n = a.len();
        let q = self.q;
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let w_len = pow_mod(root, (n / len) as u64, q);
            let half = len / 2;
            for start in (0..n).step_by(len) {
                let mut w = 1u64;
                for k in 0..half {
                    let u = a[start + k];
                    let v = a[start + k + half] * w % q;
                    a[start + k] = (u + v) % q;
                    a[start + k + half] = (u + q - v) % q;
                    w = w * w_len % q;
                }
            }
            len <<= 1;
        }
    }

    fn forward(&self, p: &Poly) -> Vec<u64> {
        let mut a: Vec<u64> = p
            .coeffs
            .iter()
            .zip(&self.psi_pow)
            .map(|(&c, &w)| u64::from(c) * w % self.q)
            .collect();
        self.cyclic(&mut a, self.omega);
        a
    }

    fn inverse(&self, mut a: Vec<u64>) -> Vec<u32> {
        self.cyclic(&mut a, self.omega_inv);
        a.iter()
            .zip(&self.psi_inv_pow)
            .map(|(&c, &w)| (c * self.n_inv % self.q * w % self.q) as u32)
            .collect()
    }
}

/// Multiplication context for one parameter set.
#[derive(Debug, Clone)]
pub struct Ring {
    n: usize,
    q: u32,
    ntt: Option<NttTables>,
}

impl Ring {
    pub fn new(params: &RlweParams) -> Self {
        Self::with_dims(params.n(), params.q())
    }

    pub fn with_dims(n: usize, q: u32) -> Self {
        Ring {
            n,
            q,
            ntt: NttTables::new(n, q),
        }
    }

    pub fn has_ntt(&self) -> bool {
        self.ntt.is_some()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        match &self.ntt {
            Some(t) => self.mul_ntt_with(t, a, b),
            None => a.mul_schoolbook(b),
        }
    }

    /// NTT product. Panics when the ring has no NTT; see [`Ring::has_ntt`].
    pub fn mul_ntt(&self, a: &Poly, b: &Poly) -> Poly {
        let t = self.ntt.as_ref().expect("modulus does not support the NTT");
        self.mul_ntt_with(t, a, b)
    }

    fn mul_ntt_with(&self, t: &NttTables, a: &Poly, b: &Poly) -> Poly {
        a.assert_compatible(b);
        assert_eq!(a.n(), self.n);
        let fa = t.forward(a);
        let fb = t.forward(b);
        let prod: Vec<u64> = fa.iter().zip(&fb).map(|(x, y)| x * y % t.q).collect();
        Poly {
            coeffs: t.inverse(prod),
            q: self.q,
        }
    }
}
