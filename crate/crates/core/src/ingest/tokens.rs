//! Cross-chain token equivalence.

use std::collections::HashMap;
use std::io::Read;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::model::{CanonicalToken, Chain, RecordError, TransactionRecord};

#[derive(Debug, Error)]
pub enum TokenMapError {
    #[error("conflicting entries for ({chain}, {raw}): {first} vs {second}")]
    Conflict {
        chain: Chain,
        raw: String,
        first: String,
        second: String,
    },
    #[error("({chain}, {canonical}) is a canonical target but itself maps to {target}")]
    NotIdempotent {
        chain: Chain,
        canonical: String,
        target: String,
    },
    #[error("line {line}: {source}")]
    Row { line: u64, source: RecordError },
    #[error("unreadable token map: {0}")]
    Csv(#[from] csv::Error),
}

/// Function from `(chain, raw symbol)` to canonical symbol. Pairs without an
/// entry map to themselves.
#[derive(Debug, Clone, Default)]
pub struct TokenEquivalenceMap {
    // One table per chain, indexed by `Chain::index`, so lookups borrow `&str`.
    per_chain: [HashMap<Box<str>, Arc<str>>; Chain::COUNT],
}

const AXELAR_USDC: &str = "axlUSDC";

impl TokenEquivalenceMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Default map covering the common bridged variants of USDC, USDT and
    /// WETH.
    pub fn builtin() -> Self {
        let mut map = Self::new();
        let mut add = |chain: Chain, raw: &str, canonical: &str| {
            map.insert(chain, raw, canonical)
                .expect("builtin token map is consistent");
        };
        for chain in Chain::ALL {
            add(chain, AXELAR_USDC, "USDC");
            add(chain, "axlWETH", "WETH");
            add(chain, "axlUSDT", "USDT");
        }
        for chain in [Chain::Arbitrum, Chain::Optimism, Chain::Polygon, Chain::Avalanche, Chain::Gnosis] {
            add(chain, "USDC.e", "USDC");
        }
        add(Chain::Base, "USDbC", "USDC");
        add(Chain::Avalanche, "USDT.e", "USDT");
        add(Chain::Avalanche, "WETH.e", "WETH");
        for chain in [Chain::Ethereum, Chain::Arbitrum, Chain::Optimism, Chain::Base, Chain::Blast] {
            add(chain, "ETH", "WETH");
        }
        map.check_idempotent().expect("builtin token map is idempotent");
        map
    }

    /// Adds one entry. Re-adding an identical entry is a no-op; a different
    /// target for an existing key is an error.
    pub fn insert(&mut self, chain: Chain, raw: &str, canonical: &str) -> Result<(), TokenMapError> {
        let table = &mut self.per_chain[chain.index()];
        match table.get(raw) {
            Some(existing) if &**existing != canonical => Err(TokenMapError::Conflict {
                chain,
                raw: raw.to_string(),
                first: existing.to_string(),
                second: canonical.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                table.insert(Box::from(raw), Arc::from(canonical));
                Ok(())
            }
        }
    }

    fn check_idempotent(&self) -> Result<(), TokenMapError> {
        for chain in Chain::ALL {
            let table = &self.per_chain[chain.index()];
            let mut targets: Vec<&Arc<str>> = table.values().collect();
            targets.sort();
            for canonical in targets {
                if let Some(target) = table.get(&**canonical) {
                    if target != canonical {
                        return Err(TokenMapError::NotIdempotent {
                            chain,
                            canonical: canonical.to_string(),
                            target: target.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Reads a `chain,raw_symbol,canonical_symbol` CSV with header.
    pub fn from_csv(reader: impl Read) -> Result<Self, TokenMapError> {
        let mut map = Self::new();
        map.extend_from_csv(reader)?;
        Ok(map)
    }

    /// Adds the entries of a token map CSV to this map.
    pub fn extend_from_csv(&mut self, reader: impl Read) -> Result<(), TokenMapError> {
        #[derive(Deserialize)]
        struct Row {
            chain: String,
            raw_symbol: String,
            canonical_symbol: String,
        }

        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let mut record = csv::StringRecord::new();
        while rdr.read_record(&mut record)? {
            let line = record.position().map_or(0, |p| p.line());
            let row: Row = record.deserialize(Some(&headers))?;
            let chain: Chain = row
                .chain
                .parse()
                .map_err(|source| TokenMapError::Row { line, source })?;
            self.insert(chain, &row.raw_symbol, &row.canonical_symbol)?;
        }
        self.check_idempotent()
    }

    pub fn canonical<'a>(&'a self, chain: Chain, raw: &'a str) -> &'a str {
        self.per_chain[chain.index()]
            .get(raw)
            .map(|s| &**s)
            .unwrap_or(raw)
    }

    fn canonical_arc(&self, chain: Chain, raw: &Arc<str>) -> Arc<str> {
        match self.per_chain[chain.index()].get(&**raw) {
            Some(canonical) => canonical.clone(),
            None => raw.clone(),
        }
    }

    pub fn canonicalize_token(&self, chain: Chain, token: &CanonicalToken) -> CanonicalToken {
        let native = token.native_arc();
        CanonicalToken::new(self.canonical_arc(chain, native), native.clone())
    }

    pub fn len(&self) -> usize {
        self.per_chain.iter().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Replaces every token by its canonical form. `token_in` is resolved on the
/// record's chain, `token_out` on the chain it is delivered to (the
/// destination for bridges). Raw symbols are preserved.
pub fn canonicalize(mut records: Vec<TransactionRecord>, map: &TokenEquivalenceMap) -> Vec<TransactionRecord> {
    use rayon::prelude::*;
    records.par_iter_mut().for_each(|rec| canonicalize_in_place(rec, map));
    records
}

pub fn canonicalize_record(rec: &TransactionRecord, map: &TokenEquivalenceMap) -> TransactionRecord {
    let mut rec = rec.clone();
    canonicalize_in_place(&mut rec, map);
    rec
}

fn canonicalize_in_place(rec: &mut TransactionRecord, map: &TokenEquivalenceMap) {
    let unchanged = |chain: Chain, tok: &CanonicalToken| {
        tok.symbol() == map.canonical(chain, tok.native_chain_symbol())
    };
    if unchanged(rec.chain(), rec.token_in()) && unchanged(rec.output_chain(), rec.token_out()) {
        return;
    }
    let token_in = map.canonicalize_token(rec.chain(), rec.token_in());
    let token_out = map.canonicalize_token(rec.output_chain(), rec.token_out());
    rec.set_tokens(token_in, token_out);
}
