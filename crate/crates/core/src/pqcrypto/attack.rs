//! Exhaustive key-recovery search, the stand-in for a quantum decryption
//! attempt.
//!
//! Candidates `s'` with coefficients in `[-eta, eta]` are visited in
//! lexicographic order (coefficient 0 most significant, `-eta` first). A
//! candidate is accepted when `b - a*s'` is itself a valid noise vector and
//! decrypting the observed ciphertext with `s'` yields the known plaintext.
//! Classical enumeration only finishes on toy rings; on real parameter sets it
//! runs into its budget, which is the point being demonstrated.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::params::RlweParams;
use super::poly::{center, Poly, Ring};
use super::scheme::{decode_coeff, PublicKey, RlweCiphertext};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AttackOutcome {
    /// Centered coefficients of the first accepted candidate.
    Recovered { secret: Vec<i64> },
    Exhausted,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttackReport {
    #[serde(serialize_with = "big_decimal")]
    pub keyspace_size: BigUint,
    #[serde(serialize_with = "big_decimal")]
    pub keys_tried: BigUint,
    pub outcome: AttackOutcome,
    pub wall_notes: String,
}

fn big_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

/// `(2 eta + 1)^n`.
pub fn keyspace_size(params: &RlweParams) -> BigUint {
    BigUint::from(2 * params.eta() + 1).pow(params.n() as u32)
}

/// Running product `p * s'` kept in step with the odometer.
struct Tracked<'a> {
    factor: &'a Poly,
    acc: Vec<i64>,
}

impl Tracked<'_> {
    /// `acc += delta * (factor * x^k)`.
    fn shift(&mut self, k: usize, delta: i64, q: i64) {
        let n = self.acc.len();
        let f = self.factor.coeffs();
        for (j, slot) in self.acc.iter_mut().enumerate() {
            let term = if j >= k {
                i64::from(f[j - k])
            } else {
                -i64::from(f[j + n - k])
            };
            *slot = (*slot + delta * term).rem_euclid(q);
        }
    }
}

pub fn simulate_quantum_attack(
    params: &RlweParams,
    public: &PublicKey,
    ciphertext: &RlweCiphertext,
    known_plaintext: &[bool],
    budget: &BigUint,
) -> AttackReport {
    let keyspace = keyspace_size(params);
    let limit = budget.min(&keyspace).to_u64().unwrap_or(u64::MAX);
    let (n, q, eta) = (params.n(), params.q(), i64::from(params.eta()));
    let qi = i64::from(q);

    let mut digits = vec![-eta; n];
    let ring = Ring::new(params);
    let start = Poly::from_signed(digits.iter().copied(), q);
    let mut a_s = Tracked {
        factor: &public.a,
        acc: ring.mul(&public.a, &start).coeffs().iter().map(|&c| i64::from(c)).collect(),
    };
    let b: Vec<i64> = public.b.coeffs().iter().map(|&c| i64::from(c)).collect();

    let accepts = |a_s: &[i64], digits: &[i64]| -> bool {
        let small_error = a_s
            .iter()
            .zip(&b)
            .all(|(&as_j, &b_j)| center((b_j - as_j).rem_euclid(qi) as u32, q).abs() <= eta);
        if !small_error || known_plaintext.len() != n {
            return false;
        }
        let candidate = Poly::from_signed(digits.iter().copied(), q);
        let d = ciphertext.v.sub(&ring.mul(&ciphertext.u, &candidate));
        d.coeffs()
            .iter()
            .zip(known_plaintext)
            .all(|(&c, &bit)| decode_coeff(c, q) == bit)
    };

    let mut tried = 0u64;
    let mut outcome = None;
    while tried < limit {
        tried += 1;
        if accepts(&a_s.acc, &digits) {
            outcome = Some(AttackOutcome::Recovered { secret: digits.clone() });
            break;
        }
        // Odometer step; the last coefficient moves fastest.
        let mut k = n;
        let mut wrapped = true;
        while k > 0 {
            k -= 1;
            if digits[k] < eta {
                digits[k] += 1;
                a_s.shift(k, 1, qi);
                wrapped = false;
                break;
            }
            digits[k] = -eta;
            a_s.shift(k, -2 * eta, qi);
        }
        if wrapped {
            break;
        }
    }

    let keys_tried = BigUint::from(tried);
    let outcome = outcome.unwrap_or_else(|| {
        if keys_tried == keyspace {
            AttackOutcome::Exhausted
        } else {
            AttackOutcome::BudgetExceeded
        }
    });
    let wall_notes = format!(
        "classical exhaustive search standing in for a quantum key-recovery attempt on {params}; \
         {tried} of {} candidates examined{}",
        if keyspace.bits() > 64 {
            format!("{eta_base}^{n}", eta_base = 2 * eta + 1)
        } else {
            keyspace.to_string()
        },
        if budget.is_zero() { " (zero budget)" } else { "" },
    );
    AttackReport {
        keyspace_size: keyspace,
        keys_tried,
        outcome,
        wall_notes,
    }
}
