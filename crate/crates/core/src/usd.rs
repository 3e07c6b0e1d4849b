//! Fixed-point USD amounts.
//!
//! Values are stored as signed micro-dollars (six fractional digits). Ingest
//! rounds half-to-even onto that grid, after which every comparison and
//! subtraction is exact integer arithmetic.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::{Decimal, RoundingStrategy};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of fractional decimal digits kept for every amount.
pub const USD_DECIMALS: u32 = 6;
const SCALE: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseUsdError {
    #[error("not a decimal number: {0:?}")]
    Invalid(String),
    #[error("amount out of range: {0:?}")]
    OutOfRange(String),
}

/// A USD amount in micro-dollars. Profits may be negative; record values are
/// checked non-negative at validation time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Usd(i64);

impl Usd {
    pub const ZERO: Usd = Usd(0);

    pub const fn from_micros(micros: i64) -> Self {
        Usd(micros)
    }

    /// Whole cents, e.g. `Usd::from_cents(3278)` is 32.78.
    pub const fn from_cents(cents: i64) -> Self {
        Usd(cents * 10_000)
    }

    pub const fn micros(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    pub fn to_decimal(self) -> Decimal {
        Decimal::new(self.0, USD_DECIMALS)
    }

    pub fn from_decimal(value: Decimal) -> Option<Self> {
        let rounded =
            value.round_dp_with_strategy(USD_DECIMALS, RoundingStrategy::MidpointNearestEven);
        let micros = rounded.checked_mul(Decimal::from(SCALE))?;
        micros.to_i64().map(Usd)
    }

    /// Amount rounded half-to-even to cents, formatted with exactly two
    /// decimals. Display only.
    pub fn display_cents(self) -> String {
        let cents = self
            .to_decimal()
            .round_dp_with_strategy(2, RoundingStrategy::MidpointNearestEven);
        format!("{cents:.2}")
    }

    pub fn checked_sub(self, other: Usd) -> Option<Usd> {
        self.0.checked_sub(other.0).map(Usd)
    }
}

impl FromStr for Usd {
    type Err = ParseUsdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let parsed = Decimal::from_str(trimmed)
            .or_else(|_| Decimal::from_scientific(trimmed))
            .map_err(|_| ParseUsdError::Invalid(s.to_string()))?;
        Usd::from_decimal(parsed).ok_or_else(|| ParseUsdError::OutOfRange(s.to_string()))
    }
}

/// Shortest exact rendering with at least two decimals: `1000.00`, `32.78`,
/// `100.000001`.
impl fmt::Display for Usd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let whole = abs / SCALE as u64;
        let mut frac = format!("{:06}", abs % SCALE as u64);
        while frac.len() > 2 && frac.ends_with('0') {
            frac.pop();
        }
        write!(f, "{sign}{whole}.{frac}")
    }
}

impl Add for Usd {
    type Output = Usd;
    fn add(self, rhs: Usd) -> Usd {
        Usd(self.0 + rhs.0)
    }
}

impl Sub for Usd {
    type Output = Usd;
    fn sub(self, rhs: Usd) -> Usd {
        Usd(self.0 - rhs.0)
    }
}

impl Neg for Usd {
    type Output = Usd;
    fn neg(self) -> Usd {
        Usd(-self.0)
    }
}

impl Serialize for Usd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Usd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct UsdVisitor;

        impl Visitor<'_> for UsdVisitor {
            type Value = Usd;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal string or number")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Usd, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Usd, E> {
                v.checked_mul(SCALE)
                    .map(Usd)
                    .ok_or_else(|| E::custom("amount out of range"))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Usd, E> {
                i64::try_from(v)
                    .map_err(|_| E::custom("amount out of range"))
                    .and_then(|v| self.visit_i64(v))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Usd, E> {
                v.to_string().parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(UsdVisitor)
    }
}
