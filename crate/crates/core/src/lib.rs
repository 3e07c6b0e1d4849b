//! Detection of sequence-dependent multihop arbitrage across blockchains.
//!
//! A path is an alternating run of swaps and bridges by one actor, each step
//! consuming the previous step's output within a short time window. The
//! crate covers the full pipeline:
//!
//! * [`model`]: records, tokens and validated paths.
//! * [`ingest`]: CSV/JSONL parsing, admissibility filtering, token
//!   canonicalization and the time-bucketed [`ingest::TxIndex`].
//! * [`matcher`]: the five pairwise continuity predicates and their
//!   conjunction [`matcher::phi`].
//! * [`pathfinder`]: indexed path enumeration plus a brute-force oracle.
//! * [`analytics`]: profit/duration summaries and hop-count model fits.
//! * [`synth`]: seeded noise, planted paths and the reference dataset.

pub mod analytics;
pub mod ingest;
mod intern;
pub mod matcher;
pub mod model;
pub mod pathfinder;
pub mod synth;
mod usd;

pub use intern::Interner;
pub use matcher::{DetectionConfig, ValueTolerance};
pub use model::{ArbitragePath, CanonicalToken, Chain, TransactionRecord, TxKind};
pub use usd::{ParseUsdError, Usd, USD_DECIMALS};

use ingest::{build_index, canonicalize, filter_atomic_swaps, TokenEquivalenceMap, TxIndex};

/// Filter, canonicalize and index validated records.
pub fn prepare(records: Vec<TransactionRecord>, map: &TokenEquivalenceMap) -> TxIndex {
    build_index(canonicalize(filter_atomic_swaps(records), map))
}
