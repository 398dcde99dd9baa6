use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// US dollars held as an exact number of cents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Usd(i64);

impl Usd {
    pub const ZERO: Usd = Usd(0);

    pub fn from_cents(cents: i64) -> Self {
        Usd(cents)
    }

    pub fn from_dollars(dollars: i64) -> Self {
        Usd(dollars * 100)
    }

    pub fn cents(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }

    /// `self / divisor` as a correctly rounded `f64`, or `None` for a zero divisor.
    pub fn per(self, divisor: u64) -> Option<f64> {
        (divisor != 0).then(|| self.0 as f64 / (divisor as f64 * 100.0))
    }
}

impl Add for Usd {
    type Output = Usd;
    fn add(self, rhs: Usd) -> Usd {
        Usd(self.0 + rhs.0)
    }
}

impl Mul<u32> for Usd {
    type Output = Usd;
    fn mul(self, rhs: u32) -> Usd {
        Usd(self.0 * i64::from(rhs))
    }
}

impl Sum for Usd {
    fn sum<I: Iterator<Item = Usd>>(iter: I) -> Usd {
        iter.fold(Usd::ZERO, Add::add)
    }
}

impl fmt::Display for Usd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

impl Serialize for Usd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for Usd {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let dollars = match Repr::deserialize(d)? {
            Repr::Int(n) => return Ok(Usd::from_dollars(n)),
            Repr::Float(x) => x,
            Repr::Text(s) => s.trim().parse::<f64>().map_err(serde::de::Error::custom)?,
        };
        if !dollars.is_finite() {
            return Err(serde::de::Error::custom("amount must be finite"));
        }
        Ok(Usd((dollars * 100.0).round() as i64))
    }
}
