//! Pairwise validity of consecutive path steps.
//!
//! [`phi`] is the conjunction of five independent predicates: time, value,
//! token, actor and chain continuity. Each predicate is exposed on its own so
//! boundary behavior can be tested in isolation.

use std::fmt;
use std::str::FromStr;

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::{Decimal, RoundingStrategy};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{TransactionRecord, TxKind};

pub const DEFAULT_WINDOW_SECS: i64 = 300;
pub const DEFAULT_MIN_HOPS: usize = 3;
pub const DEFAULT_MAX_HOPS: usize = 6;

const PPM: u32 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("window_secs must be positive, got {0}")]
    Window(i64),
    #[error("value_tolerance must lie in (0, 1], got {0}")]
    Tolerance(String),
    #[error("hop limits must satisfy 2 <= min_hops <= max_hops, got min={min} max={max}")]
    Hops { min: usize, max: usize },
}

/// Lower-bound multiplier for value continuity, held in parts per million
/// so the interval test stays in integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueTolerance(u32);

impl ValueTolerance {
    pub fn from_ppm(ppm: u32) -> Result<Self, ConfigError> {
        if ppm == 0 || ppm > PPM {
            return Err(ConfigError::Tolerance(format!("{ppm}ppm")));
        }
        Ok(ValueTolerance(ppm))
    }

    pub fn from_f64(value: f64) -> Result<Self, ConfigError> {
        let decimal = Decimal::from_f64_retain(value)
            .ok_or_else(|| ConfigError::Tolerance(value.to_string()))?;
        Self::from_decimal(decimal).map_err(|_| ConfigError::Tolerance(value.to_string()))
    }

    fn from_decimal(value: Decimal) -> Result<Self, ConfigError> {
        let ppm = (value * Decimal::from(PPM))
            .round_dp_with_strategy(0, RoundingStrategy::MidpointNearestEven)
            .to_u32()
            .ok_or_else(|| ConfigError::Tolerance(value.to_string()))?;
        Self::from_ppm(ppm).map_err(|_| ConfigError::Tolerance(value.to_string()))
    }

    pub fn ppm(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / PPM as f64
    }
}

impl Default for ValueTolerance {
    fn default() -> Self {
        ValueTolerance(980_000)
    }
}

impl FromStr for ValueTolerance {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let decimal =
            Decimal::from_str(s.trim()).map_err(|_| ConfigError::Tolerance(s.to_string()))?;
        Self::from_decimal(decimal)
    }
}

impl fmt::Display for ValueTolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Decimal::new(self.0 as i64, 6).normalize())
    }
}

impl Serialize for ValueTolerance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for ValueTolerance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = f64::deserialize(deserializer)?;
        ValueTolerance::from_f64(value).map_err(serde::de::Error::custom)
    }
}

/// Detection parameters. Always valid once constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DetectionConfig {
    window_secs: i64,
    value_tolerance: ValueTolerance,
    min_hops: usize,
    max_hops: usize,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            window_secs: DEFAULT_WINDOW_SECS,
            value_tolerance: ValueTolerance::default(),
            min_hops: DEFAULT_MIN_HOPS,
            max_hops: DEFAULT_MAX_HOPS,
        }
    }
}

impl DetectionConfig {
    pub fn new(
        window_secs: i64,
        value_tolerance: ValueTolerance,
        min_hops: usize,
        max_hops: usize,
    ) -> Result<Self, ConfigError> {
        if window_secs <= 0 {
            return Err(ConfigError::Window(window_secs));
        }
        if min_hops < 2 || min_hops > max_hops {
            return Err(ConfigError::Hops {
                min: min_hops,
                max: max_hops,
            });
        }
        Ok(DetectionConfig {
            window_secs,
            value_tolerance,
            min_hops,
            max_hops,
        })
    }

    pub fn with_window_secs(self, window_secs: i64) -> Result<Self, ConfigError> {
        Self::new(window_secs, self.value_tolerance, self.min_hops, self.max_hops)
    }

    pub fn with_value_tolerance(self, tolerance: ValueTolerance) -> Self {
        DetectionConfig {
            value_tolerance: tolerance,
            ..self
        }
    }

    pub fn with_hops(self, min_hops: usize, max_hops: usize) -> Result<Self, ConfigError> {
        Self::new(self.window_secs, self.value_tolerance, min_hops, max_hops)
    }

    pub fn window_secs(&self) -> i64 {
        self.window_secs
    }
    pub fn value_tolerance(&self) -> ValueTolerance {
        self.value_tolerance
    }
    pub fn min_hops(&self) -> usize {
        self.min_hops
    }
    pub fn max_hops(&self) -> usize {
        self.max_hops
    }

    /// Longest admissible path length in transactions.
    pub fn max_len(&self) -> usize {
        2 * self.max_hops - 1
    }

    pub fn min_len(&self) -> usize {
        2 * self.min_hops - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("actor and chain continuity need one swap and one bridge, got {0:?} then {1:?}")]
pub struct KindMismatch(pub TxKind, pub TxKind);

/// `τ_i < τ_j <= τ_i + window`.
pub fn check_time(prev: &TransactionRecord, next: &TransactionRecord, cfg: &DetectionConfig) -> bool {
    let (ti, tj) = (prev.timestamp(), next.timestamp());
    ti < tj && tj - ti <= cfg.window_secs()
}

/// `tolerance · v_out(prev) <= v_in(next) <= v_out(prev)`, closed at both
/// ends, evaluated exactly on micro-dollar integers.
pub fn check_value(prev: &TransactionRecord, next: &TransactionRecord, cfg: &DetectionConfig) -> bool {
    let out = prev.value_out_usd().micros() as i128;
    let vin = next.value_in_usd().micros() as i128;
    let ppm = cfg.value_tolerance().ppm() as i128;
    vin <= out && vin * PPM as i128 >= ppm * out
}

/// Canonical `token_out(prev) == token_in(next)`.
pub fn check_token(prev: &TransactionRecord, next: &TransactionRecord) -> bool {
    prev.token_out() == next.token_in()
}

/// Swap→Bridge keeps the sender; Bridge→Swap hands over to the bridge
/// receiver.
pub fn check_actor(prev: &TransactionRecord, next: &TransactionRecord) -> Result<bool, KindMismatch> {
    match (prev.kind(), next.kind()) {
        (TxKind::Swap, TxKind::Bridge) => Ok(next.sender() == prev.sender()),
        (TxKind::Bridge, TxKind::Swap) => Ok(next.sender() == prev.receiver()),
        (a, b) => Err(KindMismatch(a, b)),
    }
}

/// Swap→Bridge stays on one chain; Bridge→Swap lands on the bridge's
/// destination, which differs from its origin.
pub fn check_chain(prev: &TransactionRecord, next: &TransactionRecord) -> Result<bool, KindMismatch> {
    match (prev.kind(), next.kind()) {
        (TxKind::Swap, TxKind::Bridge) => Ok(next.chain() == prev.chain()),
        (TxKind::Bridge, TxKind::Swap) => {
            Ok(Some(next.chain()) == prev.dest_chain() && next.chain() != prev.chain())
        }
        (a, b) => Err(KindMismatch(a, b)),
    }
}

/// Pairwise indicator: true iff all five continuity predicates hold. Pairs
/// of the same kind are never valid.
pub fn phi(prev: &TransactionRecord, next: &TransactionRecord, cfg: &DetectionConfig) -> bool {
    check_time(prev, next, cfg)
        && check_value(prev, next, cfg)
        && check_token(prev, next)
        && check_actor(prev, next).unwrap_or(false)
        && check_chain(prev, next).unwrap_or(false)
}
