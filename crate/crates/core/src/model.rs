//! Transaction records and arbitrage paths.
//!
//! A [`TransactionRecord`] is one normalized swap or bridge event. An
//! [`ArbitragePath`] is an odd-length sequence of records alternating
//! `Swap, Bridge, Swap, ..., Swap` in which every consecutive pair passes the
//! pairwise validity check in [`crate::matcher::phi`].

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intern::Interner;
use crate::matcher::{self, DetectionConfig};
use crate::usd::Usd;

/// Closed registry of supported chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chain {
    Ethereum,
    Arbitrum,
    Near,
    Polygon,
    Bsc,
    Solana,
    Blast,
    Osmosis,
    Avalanche,
    Optimism,
    Base,
    Gnosis,
}

impl Chain {
    pub const COUNT: usize = 12;

    pub const ALL: [Chain; 12] = [
        Chain::Ethereum,
        Chain::Arbitrum,
        Chain::Near,
        Chain::Polygon,
        Chain::Bsc,
        Chain::Solana,
        Chain::Blast,
        Chain::Osmosis,
        Chain::Avalanche,
        Chain::Optimism,
        Chain::Base,
        Chain::Gnosis,
    ];

    /// Dense ordinal in `0..Chain::COUNT`.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Canonical lowercase name used in files.
    pub fn as_str(self) -> &'static str {
        match self {
            Chain::Ethereum => "ethereum",
            Chain::Arbitrum => "arbitrum",
            Chain::Near => "near",
            Chain::Polygon => "polygon",
            Chain::Bsc => "bsc",
            Chain::Solana => "solana",
            Chain::Blast => "blast",
            Chain::Osmosis => "osmosis",
            Chain::Avalanche => "avalanche",
            Chain::Optimism => "optimism",
            Chain::Base => "base",
            Chain::Gnosis => "gnosis",
        }
    }

    /// Short label for human-readable tables (`Base→Eth→Base`).
    pub fn label(self) -> &'static str {
        match self {
            Chain::Ethereum => "Eth",
            Chain::Arbitrum => "Arb",
            Chain::Near => "Near",
            Chain::Polygon => "Poly",
            Chain::Bsc => "BSC",
            Chain::Solana => "Sol",
            Chain::Blast => "Blast",
            Chain::Osmosis => "Osmo",
            Chain::Avalanche => "Avax",
            Chain::Optimism => "Opt",
            Chain::Base => "Base",
            Chain::Gnosis => "Gnosis",
        }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Chain {
    type Err = RecordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chain = match s.trim().to_ascii_lowercase().as_str() {
            "ethereum" | "eth" | "mainnet" => Chain::Ethereum,
            "arbitrum" | "arb" | "arbitrum-one" => Chain::Arbitrum,
            "near" => Chain::Near,
            "polygon" | "poly" | "matic" => Chain::Polygon,
            "bsc" | "bnb" | "binance" => Chain::Bsc,
            "solana" | "sol" => Chain::Solana,
            "blast" => Chain::Blast,
            "osmosis" | "osmo" => Chain::Osmosis,
            "avalanche" | "avax" => Chain::Avalanche,
            "optimism" | "opt" | "op" => Chain::Optimism,
            "base" => Chain::Base,
            "gnosis" | "xdai" => Chain::Gnosis,
            _ => return Err(RecordError::UnknownChain(s.to_string())),
        };
        Ok(chain)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TxKind {
    Swap,
    Bridge,
}

impl TxKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TxKind::Swap => "swap",
            TxKind::Bridge => "bridge",
        }
    }
}

impl FromStr for TxKind {
    type Err = RecordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "swap" => Ok(TxKind::Swap),
            "bridge" => Ok(TxKind::Bridge),
            _ => Err(RecordError::InvalidField {
                field: "kind",
                value: s.to_string(),
            }),
        }
    }
}

/// Token identity after cross-chain equivalence mapping.
///
/// Equality and hashing use only the canonical `symbol`; the raw
/// chain-local symbol is kept for reporting and for the per-swap
/// token-change test.
#[derive(Clone, Debug)]
pub struct CanonicalToken {
    symbol: Arc<str>,
    native_chain_symbol: Arc<str>,
}

impl CanonicalToken {
    /// A token as ingested: canonical and native symbols coincide until
    /// canonicalization runs.
    pub fn raw(symbol: impl Into<Arc<str>>) -> Self {
        let symbol = symbol.into();
        CanonicalToken {
            native_chain_symbol: symbol.clone(),
            symbol,
        }
    }

    pub fn new(symbol: impl Into<Arc<str>>, native_chain_symbol: impl Into<Arc<str>>) -> Self {
        CanonicalToken {
            symbol: symbol.into(),
            native_chain_symbol: native_chain_symbol.into(),
        }
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn native_chain_symbol(&self) -> &str {
        &self.native_chain_symbol
    }

    pub(crate) fn native_arc(&self) -> &Arc<str> {
        &self.native_chain_symbol
    }
}

impl PartialEq for CanonicalToken {
    fn eq(&self, other: &Self) -> bool {
        self.symbol == other.symbol
    }
}

impl Eq for CanonicalToken {}

impl std::hash::Hash for CanonicalToken {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.symbol.hash(state);
    }
}

impl fmt::Display for CanonicalToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("negative value in `{0}`")]
    NegativeValue(&'static str),
    #[error("bridge destination equals origin chain ({0})")]
    BridgeSameChain(Chain),
    #[error("unknown chain {0:?}")]
    UnknownChain(String),
    #[error("swap carries a destination chain")]
    DestChainOnSwap,
    #[error("invalid `{field}`: {value:?}")]
    InvalidField { field: &'static str, value: String },
    #[error("duplicate transaction hash {0:?}")]
    DuplicateHash(String),
    #[error("malformed row: {0}")]
    Malformed(String),
}

/// Field map of one input row before validation. Empty strings count as
/// absent.
#[derive(Debug, Clone, Default)]
pub struct RawRecord<'a> {
    pub hash: Option<Cow<'a, str>>,
    pub timestamp: Option<Cow<'a, str>>,
    pub sender: Option<Cow<'a, str>>,
    pub receiver: Option<Cow<'a, str>>,
    pub chain: Option<Cow<'a, str>>,
    pub dest_chain: Option<Cow<'a, str>>,
    pub token_in: Option<Cow<'a, str>>,
    pub token_out: Option<Cow<'a, str>>,
    pub value_in_usd: Option<Cow<'a, str>>,
    pub value_out_usd: Option<Cow<'a, str>>,
    pub kind: Option<Cow<'a, str>>,
    pub leg_count: Option<Cow<'a, str>>,
}

fn present<'s>(field: &'s Option<Cow<'_, str>>) -> Option<&'s str> {
    field.as_deref().map(str::trim).filter(|s| !s.is_empty())
}

fn required<'s>(field: &'s Option<Cow<'_, str>>, name: &'static str) -> Result<&'s str, RecordError> {
    present(field).ok_or(RecordError::MissingField(name))
}

fn parse_value(field: &Option<Cow<'_, str>>, name: &'static str) -> Result<Usd, RecordError> {
    let raw = required(field, name)?;
    let value: Usd = raw.parse().map_err(|_| RecordError::InvalidField {
        field: name,
        value: raw.to_string(),
    })?;
    if value.is_negative() {
        return Err(RecordError::NegativeValue(name));
    }
    Ok(value)
}

/// Validated fields of a record, for programmatic construction.
#[derive(Debug, Clone)]
pub struct RecordParts {
    pub hash: String,
    pub timestamp: i64,
    pub sender: Arc<str>,
    pub receiver: Arc<str>,
    pub chain: Chain,
    pub dest_chain: Option<Chain>,
    pub token_in: CanonicalToken,
    pub token_out: CanonicalToken,
    pub value_in_usd: Usd,
    pub value_out_usd: Usd,
    pub kind: TxKind,
    pub leg_count: Option<u16>,
}

/// One swap or bridge event. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransactionRecord {
    hash: Box<str>,
    timestamp: i64,
    sender: Arc<str>,
    receiver: Arc<str>,
    token_in: CanonicalToken,
    token_out: CanonicalToken,
    value_in_usd: Usd,
    value_out_usd: Usd,
    chain: Chain,
    dest_chain: Option<Chain>,
    kind: TxKind,
    leg_count: Option<u16>,
}

impl TransactionRecord {
    pub fn new(parts: RecordParts) -> Result<Self, RecordError> {
        if parts.hash.trim().is_empty() {
            return Err(RecordError::MissingField("hash"));
        }
        if parts.value_in_usd.is_negative() {
            return Err(RecordError::NegativeValue("value_in_usd"));
        }
        if parts.value_out_usd.is_negative() {
            return Err(RecordError::NegativeValue("value_out_usd"));
        }
        match (parts.kind, parts.dest_chain) {
            (TxKind::Swap, Some(_)) => return Err(RecordError::DestChainOnSwap),
            (TxKind::Bridge, None) => return Err(RecordError::MissingField("dest_chain")),
            (TxKind::Bridge, Some(dest)) if dest == parts.chain => {
                return Err(RecordError::BridgeSameChain(dest))
            }
            _ => {}
        }
        if parts.leg_count == Some(0) {
            return Err(RecordError::InvalidField {
                field: "leg_count",
                value: "0".into(),
            });
        }
        Ok(TransactionRecord {
            hash: parts.hash.into_boxed_str(),
            timestamp: parts.timestamp,
            sender: parts.sender,
            receiver: parts.receiver,
            token_in: parts.token_in,
            token_out: parts.token_out,
            value_in_usd: parts.value_in_usd,
            value_out_usd: parts.value_out_usd,
            chain: parts.chain,
            dest_chain: parts.dest_chain,
            kind: parts.kind,
            leg_count: parts.leg_count,
        })
    }

    pub fn into_parts(self) -> RecordParts {
        RecordParts {
            hash: self.hash.into_string(),
            timestamp: self.timestamp,
            sender: self.sender,
            receiver: self.receiver,
            chain: self.chain,
            dest_chain: self.dest_chain,
            token_in: self.token_in,
            token_out: self.token_out,
            value_in_usd: self.value_in_usd,
            value_out_usd: self.value_out_usd,
            kind: self.kind,
            leg_count: self.leg_count,
        }
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }
    pub fn timestamp(&self) -> i64 {
        self.timestamp
    }
    pub fn sender(&self) -> &str {
        &self.sender
    }
    pub fn receiver(&self) -> &str {
        &self.receiver
    }
    pub fn chain(&self) -> Chain {
        self.chain
    }
    pub fn dest_chain(&self) -> Option<Chain> {
        self.dest_chain
    }
    pub fn token_in(&self) -> &CanonicalToken {
        &self.token_in
    }
    pub fn token_out(&self) -> &CanonicalToken {
        &self.token_out
    }
    pub fn value_in_usd(&self) -> Usd {
        self.value_in_usd
    }
    pub fn value_out_usd(&self) -> Usd {
        self.value_out_usd
    }
    pub fn kind(&self) -> TxKind {
        self.kind
    }
    pub fn leg_count(&self) -> Option<u16> {
        self.leg_count
    }
    pub fn is_swap(&self) -> bool {
        self.kind == TxKind::Swap
    }
    pub fn is_bridge(&self) -> bool {
        self.kind == TxKind::Bridge
    }

    pub(crate) fn sender_arc(&self) -> &Arc<str> {
        &self.sender
    }
    pub(crate) fn receiver_arc(&self) -> &Arc<str> {
        &self.receiver
    }

    /// Chain on which `token_out` lives: the destination for bridges.
    pub fn output_chain(&self) -> Chain {
        self.dest_chain.unwrap_or(self.chain)
    }

    pub(crate) fn set_tokens(&mut self, token_in: CanonicalToken, token_out: CanonicalToken) {
        self.token_in = token_in;
        self.token_out = token_out;
    }

    /// Total order used everywhere records need a deterministic order.
    pub fn order_key(&self) -> (i64, &str) {
        (self.timestamp, &self.hash)
    }
}

/// Validates a raw field map, allocating fresh strings.
pub fn validate_record(raw: &RawRecord<'_>) -> Result<TransactionRecord, RecordError> {
    validate_record_with(raw, &Interner::new())
}

/// Validates a raw field map, sharing address and symbol storage through
/// `interner`.
pub fn validate_record_with(
    raw: &RawRecord<'_>,
    interner: &Interner,
) -> Result<TransactionRecord, RecordError> {
    let hash = required(&raw.hash, "hash")?;
    let ts_raw = required(&raw.timestamp, "timestamp")?;
    let timestamp: i64 = ts_raw.parse().map_err(|_| RecordError::InvalidField {
        field: "timestamp",
        value: ts_raw.to_string(),
    })?;
    let kind: TxKind = required(&raw.kind, "kind")?.parse()?;
    let sender = required(&raw.sender, "sender")?;
    let receiver = required(&raw.receiver, "receiver")?;
    let chain: Chain = required(&raw.chain, "chain")?.parse()?;
    let dest_chain = match (kind, present(&raw.dest_chain)) {
        (TxKind::Swap, None) => None,
        (TxKind::Swap, Some(_)) => return Err(RecordError::DestChainOnSwap),
        (TxKind::Bridge, None) => return Err(RecordError::MissingField("dest_chain")),
        (TxKind::Bridge, Some(d)) => Some(d.parse::<Chain>()?),
    };
    let token_in = required(&raw.token_in, "token_in")?;
    let token_out = required(&raw.token_out, "token_out")?;
    let value_in_usd = parse_value(&raw.value_in_usd, "value_in_usd")?;
    let value_out_usd = parse_value(&raw.value_out_usd, "value_out_usd")?;
    let leg_count = match present(&raw.leg_count) {
        None => None,
        Some(s) => Some(s.parse::<u16>().map_err(|_| RecordError::InvalidField {
            field: "leg_count",
            value: s.to_string(),
        })?),
    };

    TransactionRecord::new(RecordParts {
        hash: hash.to_string(),
        timestamp,
        sender: interner.intern(sender),
        receiver: interner.intern(receiver),
        chain,
        dest_chain,
        token_in: CanonicalToken::raw(interner.intern(token_in)),
        token_out: CanonicalToken::raw(interner.intern(token_out)),
        value_in_usd,
        value_out_usd,
        kind,
        leg_count,
    })
}

/// True iff the kinds read `Swap, Bridge, Swap, ..., Swap` with odd length
/// of at least three.
pub fn path_shape_ok(transactions: &[TransactionRecord]) -> bool {
    kinds_alternate(transactions.iter().map(TransactionRecord::kind))
}

pub(crate) fn kinds_alternate(kinds: impl ExactSizeIterator<Item = TxKind>) -> bool {
    let len = kinds.len();
    if len < 3 || len.is_multiple_of(2) {
        return false;
    }
    kinds.enumerate().all(|(i, kind)| {
        let expected = if i % 2 == 0 { TxKind::Swap } else { TxKind::Bridge };
        kind == expected
    })
}

/// Hop count of a path with `len` transactions.
pub fn hops_for_len(len: usize) -> usize {
    len.div_ceil(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("transactions do not alternate swap/bridge with odd length >= 3")]
    BadShape,
    #[error("pair {0} -> {1} fails the pairwise validity check")]
    InvalidPair(usize, usize),
    #[error("no swap changes its token")]
    Ineffective,
}

/// A validated multihop arbitrage path and its derived metrics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArbitragePath {
    transactions: Vec<TransactionRecord>,
    hops: usize,
    duration_secs: i64,
    gross_profit_usd: Usd,
}

impl ArbitragePath {
    /// Checks shape, every consecutive pair, and the token-change rule.
    pub fn try_new(
        transactions: Vec<TransactionRecord>,
        cfg: &DetectionConfig,
    ) -> Result<Self, PathError> {
        if !path_shape_ok(&transactions) {
            return Err(PathError::BadShape);
        }
        if let Some(i) = transactions
            .windows(2)
            .position(|pair| !matcher::phi(&pair[0], &pair[1], cfg))
        {
            return Err(PathError::InvalidPair(i, i + 1));
        }
        if !crate::pathfinder::is_effective(&transactions) {
            return Err(PathError::Ineffective);
        }
        Ok(Self::from_checked(transactions))
    }

    /// Callers guarantee the path invariants already hold.
    pub(crate) fn from_checked(transactions: Vec<TransactionRecord>) -> Self {
        debug_assert!(path_shape_ok(&transactions));
        let first = &transactions[0];
        let last = &transactions[transactions.len() - 1];
        ArbitragePath {
            hops: hops_for_len(transactions.len()),
            duration_secs: last.timestamp() - first.timestamp(),
            gross_profit_usd: last.value_out_usd() - first.value_in_usd(),
            transactions,
        }
    }

    pub fn transactions(&self) -> &[TransactionRecord] {
        &self.transactions
    }
    pub fn hops(&self) -> usize {
        self.hops
    }
    pub fn duration_secs(&self) -> i64 {
        self.duration_secs
    }
    pub fn gross_profit_usd(&self) -> Usd {
        self.gross_profit_usd
    }

    pub fn first(&self) -> &TransactionRecord {
        &self.transactions[0]
    }

    pub fn last(&self) -> &TransactionRecord {
        &self.transactions[self.transactions.len() - 1]
    }

    pub fn swaps(&self) -> impl Iterator<Item = &TransactionRecord> {
        self.transactions.iter().step_by(2)
    }

    /// Chain of each swap, in order: one entry per hop.
    pub fn chain_path(&self) -> Vec<Chain> {
        self.swaps().map(TransactionRecord::chain).collect()
    }

    /// `Base→Eth→Base` style rendering.
    pub fn chain_path_label(&self) -> String {
        self.chain_path()
            .iter()
            .map(|c| c.label())
            .collect::<Vec<_>>()
            .join("→")
    }

    /// Distinct raw swap symbols in order of first appearance.
    pub fn token_symbols(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for swap in self.swaps() {
            for tok in [swap.token_in(), swap.token_out()] {
                let sym = tok.native_chain_symbol();
                if !seen.iter().any(|s| s == sym) {
                    seen.push(sym.to_string());
                }
            }
        }
        seen
    }

    /// The acting address: sender of the first swap.
    pub fn actor(&self) -> &str {
        self.first().sender()
    }

    pub fn hash_sequence(&self) -> Vec<&str> {
        self.transactions.iter().map(TransactionRecord::hash).collect()
    }
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;

    fn raw<'a>(pairs: &[(&str, &'a str)]) -> RawRecord<'a> {
        let mut r = RawRecord::default();
        for (k, v) in pairs {
            let v = Some(Cow::Borrowed(*v));
            match *k {
                "hash" => r.hash = v,
                "timestamp" => r.timestamp = v,
                "sender" => r.sender = v,
                "receiver" => r.receiver = v,
                "chain" => r.chain = v,
                "dest_chain" => r.dest_chain = v,
                "token_in" => r.token_in = v,
                "token_out" => r.token_out = v,
                "value_in_usd" => r.value_in_usd = v,
                "value_out_usd" => r.value_out_usd = v,
                "kind" => r.kind = v,
                "leg_count" => r.leg_count = v,
                _ => panic!("unknown key {k}"),
            }
        }
        r
    }

    fn base_swap() -> Vec<(&'static str, &'static str)> {
        vec![
            ("hash", "0x01"),
            ("timestamp", "1700000000"),
            ("sender", "0xaa"),
            ("receiver", "0xaa"),
            ("chain", "base"),
            ("token_in", "USDC"),
            ("token_out", "BAL"),
            ("value_in_usd", "1000"),
            ("value_out_usd", "1005"),
            ("kind", "swap"),
        ]
    }

    fn with(mut fields: Vec<(&'static str, &'static str)>, key: &'static str, value: &'static str) -> Vec<(&'static str, &'static str)> {
        fields.retain(|(k, _)| *k != key);
        fields.push((key, value));
        fields
    }

    #[test]
    fn valid_swap() {
        let rec = validate_record(&raw(&base_swap())).unwrap();
        assert_eq!(rec.kind(), TxKind::Swap);
        assert_eq!(rec.chain(), Chain::Base);
        assert_eq!(rec.dest_chain(), None);
        assert_eq!(rec.value_in_usd(), Usd::from_cents(100_000));
        assert_eq!(rec.value_out_usd(), Usd::from_cents(100_500));
    }

    #[test]
    fn bridge_same_chain_rejected() {
        let fields = with(with(base_swap(), "kind", "bridge"), "dest_chain", "base");
        assert_eq!(
            validate_record(&raw(&fields)),
            Err(RecordError::BridgeSameChain(Chain::Base))
        );
    }

    #[test]
    fn negative_value_rejected() {
        let fields = with(base_swap(), "value_in_usd", "-1");
        assert_eq!(
            validate_record(&raw(&fields)),
            Err(RecordError::NegativeValue("value_in_usd"))
        );
    }

    #[test]
    fn missing_and_unknown_fields() {
        let mut fields = base_swap();
        fields.retain(|(k, _)| *k != "value_out_usd");
        assert_eq!(
            validate_record(&raw(&fields)),
            Err(RecordError::MissingField("value_out_usd"))
        );
        let fields = with(base_swap(), "chain", "tron");
        assert_eq!(
            validate_record(&raw(&fields)),
            Err(RecordError::UnknownChain("tron".into()))
        );
        let fields = with(base_swap(), "hash", "  ");
        assert_eq!(validate_record(&raw(&fields)), Err(RecordError::MissingField("hash")));
    }

    #[test]
    fn bridge_requires_destination_and_swap_forbids_it() {
        let fields = with(base_swap(), "kind", "bridge");
        assert_eq!(
            validate_record(&raw(&fields)),
            Err(RecordError::MissingField("dest_chain"))
        );
        let fields = with(base_swap(), "dest_chain", "ethereum");
        assert_eq!(validate_record(&raw(&fields)), Err(RecordError::DestChainOnSwap));
        let fields = with(with(base_swap(), "kind", "Bridge"), "dest_chain", "eth");
        let rec = validate_record(&raw(&fields)).unwrap();
        assert_eq!(rec.dest_chain(), Some(Chain::Ethereum));
        assert_eq!(rec.output_chain(), Chain::Ethereum);
    }

    #[test]
    fn chain_aliases_round_trip() {
        for chain in Chain::ALL {
            assert_eq!(chain.as_str().parse::<Chain>().unwrap(), chain);
            assert_eq!(chain.label().parse::<Chain>().unwrap(), chain);
        }
    }

    #[test]
    fn shape_predicate() {
        let s = swap("s1", 0, "a", Chain::Base, "USDC", "BAL", 1, 1);
        let b = bridge("b1", 1, "a", "a", Chain::Base, Chain::Ethereum, "BAL", 1, 1);
        assert!(path_shape_ok(&[s.clone(), b.clone(), s.clone()]));
        assert!(!path_shape_ok(&[s.clone(), s.clone(), b.clone()]));
        assert!(path_shape_ok(&[s.clone(), b.clone(), s.clone(), b.clone(), s.clone()]));
        assert!(!path_shape_ok(std::slice::from_ref(&s)));
        assert!(!path_shape_ok(&[s.clone(), b.clone()]));
        assert!(!path_shape_ok(&[b.clone(), s.clone(), b.clone()]));
        assert!(!path_shape_ok(&[]));
    }

    #[test]
    fn tokens_compare_by_canonical_symbol() {
        let a = CanonicalToken::new("USDC", "axlUSDC");
        let b = CanonicalToken::raw("USDC");
        assert_eq!(a, b);
        assert_ne!(a.native_chain_symbol(), b.native_chain_symbol());
    }
}
