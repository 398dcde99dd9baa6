use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CryptoError;

/// Registered parameter sets. `Custom` covers experimental sets built with
/// [`RlweParams::custom`]; they have no wire id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamSet {
    Toy4,
    Toy8,
    Std256,
    Std512,
    Custom,
}

impl ParamSet {
    pub const REGISTERED: [ParamSet; 4] = [ParamSet::Toy4, ParamSet::Toy8, ParamSet::Std256, ParamSet::Std512];

    pub fn name(self) -> &'static str {
        match self {
            ParamSet::Toy4 => "TOY-4",
            ParamSet::Toy8 => "TOY-8",
            ParamSet::Std256 => "STD-256",
            ParamSet::Std512 => "STD-512",
            ParamSet::Custom => "CUSTOM",
        }
    }

    /// Byte stored in the payload wire header.
    pub fn wire_id(self) -> Option<u8> {
        match self {
            ParamSet::Toy4 => Some(1),
            ParamSet::Toy8 => Some(2),
            ParamSet::Std256 => Some(3),
            ParamSet::Std512 => Some(4),
            ParamSet::Custom => None,
        }
    }
}

/// Ring degree `n`, modulus `q` and noise bound `eta` for
/// `Z_q[x]/(x^n + 1)` with centered-binomial noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RlweParams {
    set: ParamSet,
    n: usize,
    q: u32,
    eta: u32,
}

impl RlweParams {
    pub fn registered(set: ParamSet) -> Result<Self, CryptoError> {
        let (n, q, eta) = match set {
            ParamSet::Toy4 => (4, 257, 1),
            ParamSet::Toy8 => (8, 257, 1),
            ParamSet::Std256 => (256, 7681, 2),
            ParamSet::Std512 => (512, 12289, 2),
            ParamSet::Custom => return Err(CryptoError::UnregisteredParams("CUSTOM".into())),
        };
        Ok(RlweParams { set, n, q, eta })
    }

    pub fn toy4() -> Self {
        Self::registered(ParamSet::Toy4).expect("registered")
    }
    pub fn toy8() -> Self {
        Self::registered(ParamSet::Toy8).expect("registered")
    }
    pub fn std256() -> Self {
        Self::registered(ParamSet::Std256).expect("registered")
    }
    pub fn std512() -> Self {
        Self::registered(ParamSet::Std512).expect("registered")
    }

    pub fn from_wire_id(id: u8) -> Result<Self, CryptoError> {
        ParamSet::REGISTERED
            .into_iter()
            .find(|s| s.wire_id() == Some(id))
            .ok_or_else(|| CryptoError::UnregisteredParams(format!("wire id {id}")))
            .and_then(Self::registered)
    }

    /// Experimental parameters, e.g. for noiseless or tiny-ring exercises.
    ///
    /// `n` must be a power of two up to 1024, `q` an odd prime below 2^16 and
    /// `2 * eta` at most 32 and below `q`.
    pub fn custom(n: usize, q: u32, eta: u32) -> Result<Self, CryptoError> {
        let bad = |why: &str| Err(CryptoError::InvalidParams(format!("n={n} q={q} eta={eta}: {why}")));
        if n == 0 || !n.is_power_of_two() || n > 1024 {
            return bad("n must be a power of two in 1..=1024");
        }
        if !(3..(1 << 16)).contains(&q) || !is_prime(q) {
            return bad("q must be an odd prime below 65536");
        }
        if eta > 16 || 2 * eta >= q {
            return bad("eta out of range");
        }
        Ok(RlweParams {
            set: ParamSet::Custom,
            n,
            q,
            eta,
        })
    }

    pub fn set(&self) -> ParamSet {
        self.set
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn eta(&self) -> u32 {
        self.eta
    }
    pub fn name(&self) -> &'static str {
        self.set.name()
    }

    pub fn is_registered(&self) -> bool {
        self.set != ParamSet::Custom
    }

    /// `floor(q / 2)`, the encoding of a one bit.
    pub fn half_q(&self) -> u32 {
        self.q / 2
    }

    /// `q = 1 mod 2n`, so a negacyclic NTT exists.
    pub fn supports_ntt(&self) -> bool {
        (self.q as u64 - 1) % (2 * self.n as u64) == 0
    }

    /// Largest possible decryption noise magnitude, `2 n eta^2 + eta`.
    pub fn worst_case_noise(&self) -> u64 {
        2 * self.n as u64 * u64::from(self.eta).pow(2) + u64::from(self.eta)
    }

    /// Noise magnitude up to which decoding is guaranteed to succeed.
    pub fn decoding_radius(&self) -> u64 {
        u64::from(self.half_q()).saturating_sub(1) / 2
    }

    pub fn worst_case_margin_holds(&self) -> bool {
        self.worst_case_noise() <= self.decoding_radius()
    }

    /// Hoeffding upper bound on the probability that a single ciphertext
    /// decrypts with at least one wrong bit.
    ///
    /// Each noise coefficient is a sum of `2n` independent zero-mean products
    /// bounded by `eta^2` plus one term bounded by `eta`.
    pub fn decryption_failure_bound(&self) -> f64 {
        if self.worst_case_margin_holds() {
            return 0.0;
        }
        let eta = f64::from(self.eta);
        let t = self.decoding_radius() as f64 + 1.0;
        let ranges = 2.0 * self.n as f64 * (2.0 * eta * eta).powi(2) + (2.0 * eta).powi(2);
        let per_coeff = 2.0 * (-2.0 * t * t / ranges).exp();
        (self.n as f64 * per_coeff).min(1.0)
    }

    /// A set is "correct" when decryption failure is either impossible or
    /// bounded below 2^-64 per ciphertext.
    pub fn is_correct(&self) -> bool {
        self.decryption_failure_bound() < 2f64.powi(-64)
    }

    pub(crate) fn check(&self) -> Result<(), CryptoError> {
        match self.set {
            ParamSet::Custom => Self::custom(self.n, self.q, self.eta).map(|_| ()),
            set => {
                if Self::registered(set)? == *self {
                    Ok(())
                } else {
                    Err(CryptoError::UnregisteredParams(set.name().into()))
                }
            }
        }
    }
}

impl fmt::Display for RlweParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, q={}, eta={})", self.name(), self.n, self.q, self.eta)
    }
}

impl FromStr for RlweParams {
    type Err = CryptoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ParamSet::REGISTERED
            .into_iter()
            .find(|set| set.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CryptoError::UnregisteredParams(s.to_string()))
            .and_then(Self::registered)
    }
}

// Only registered sets have a name that survives a round trip.
impl Serialize for RlweParams {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RlweParams {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}
