//! Enumeration of valid multihop paths.
//!
//! The search seeds on every swap and extends forward one step at a time
//! through index range scans: a swap is followed by bridges the same sender
//! issues on the same chain, and a bridge by swaps its receiver makes on the
//! destination chain, both within `(τ_last, τ_last + window]`. Every
//! successor passing [`phi`] is explored. The collected paths are then
//! reduced to maximal ones and sorted.
//!
//! Because consecutive steps have strictly increasing timestamps, a
//! candidate can never revisit a transaction.

mod oracle;

use std::collections::HashSet;
use std::hash::Hash;

use rayon::prelude::*;

use crate::ingest::TxIndex;
use crate::matcher::{phi, DetectionConfig};
use crate::model::{hops_for_len, ArbitragePath, TransactionRecord};

pub use oracle::{brute_force_find, compare_results, OracleDiff, OracleError, MAX_ORACLE_RECORDS};

type RecordId = u32;

/// A partial path during the search. Every adjacent pair passes [`phi`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateChain {
    ids: Vec<RecordId>,
}

impl CandidateChain {
    pub fn seed(id: RecordId) -> Self {
        CandidateChain { ids: vec![id] }
    }

    pub fn ids(&self) -> &[RecordId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn last<'a>(&self, index: &'a TxIndex) -> &'a TransactionRecord {
        index.get(*self.ids.last().expect("candidate chains are never empty"))
    }

    pub fn duration_secs(&self, index: &TxIndex) -> i64 {
        match (self.ids.first(), self.ids.last()) {
            (Some(&a), Some(&b)) => index.get(b).timestamp() - index.get(a).timestamp(),
            _ => 0,
        }
    }

    pub fn contains(&self, id: RecordId) -> bool {
        self.ids.contains(&id)
    }

    pub fn records<'a>(&'a self, index: &'a TxIndex) -> impl Iterator<Item = &'a TransactionRecord> {
        self.ids.iter().map(move |&id| index.get(id))
    }

    fn pushed(&self, id: RecordId) -> Self {
        let mut ids = Vec::with_capacity(self.ids.len() + 1);
        ids.extend_from_slice(&self.ids);
        ids.push(id);
        CandidateChain { ids }
    }
}

/// All one-step extensions of `chain` whose new pair passes [`phi`].
pub fn extend(chain: &CandidateChain, index: &TxIndex, cfg: &DetectionConfig) -> Vec<CandidateChain> {
    let last = chain.last(index);
    let after = last.timestamp();
    let until = after.saturating_add(cfg.window_secs());
    let candidates = match last.dest_chain() {
        // A bridge hands over to its receiver on the destination chain.
        Some(dest) => index.sent_between(last.receiver(), dest, after, until),
        None => index.sent_between(last.sender(), last.chain(), after, until),
    };
    candidates
        .iter()
        .copied()
        .filter(|&id| !chain.contains(id) && phi(last, index.get(id), cfg))
        .map(|id| chain.pushed(id))
        .collect()
}

/// False iff every swap leaves its (chain-local) token unchanged.
pub fn is_effective(path: &[TransactionRecord]) -> bool {
    swaps_change_token(path.iter())
}

fn swaps_change_token<'a>(path: impl Iterator<Item = &'a TransactionRecord>) -> bool {
    path.step_by(2).any(|swap| {
        swap.token_in().native_chain_symbol() != swap.token_out().native_chain_symbol()
    })
}

fn search(chain: CandidateChain, index: &TxIndex, cfg: &DetectionConfig, out: &mut Vec<Vec<RecordId>>) {
    if chain.len() % 2 == 1 {
        let hops = hops_for_len(chain.len());
        if hops >= cfg.min_hops() && swaps_change_token(chain.records(index)) {
            out.push(chain.ids.clone());
        }
        if hops >= cfg.max_hops() {
            return;
        }
    }
    for next in extend(&chain, index, cfg) {
        search(next, index, cfg, out);
    }
}

/// Maximal valid paths as record-id sequences, in output order.
pub fn find_path_ids(index: &TxIndex, cfg: &DetectionConfig) -> Vec<Vec<RecordId>> {
    let found: Vec<Vec<RecordId>> = (0..index.len() as RecordId)
        .into_par_iter()
        .filter(|&id| index.get(id).is_swap())
        .flat_map_iter(|seed| {
            let mut out = Vec::new();
            search(CandidateChain::seed(seed), index, cfg, &mut out);
            out
        })
        .collect();
    let keep = maximal_positions(&found);
    let mut kept: Vec<Vec<RecordId>> = keep.into_iter().map(|i| found[i].clone()).collect();
    // Ids follow (timestamp, hash) order, so this sorts by first timestamp,
    // then first hash, then the rest of the sequence.
    kept.sort_unstable();
    kept
}

/// Every maximal path with `min_hops <= n <= max_hops` that passes all
/// pairwise checks and changes at least one token.
pub fn find_paths(index: &TxIndex, cfg: &DetectionConfig) -> Vec<ArbitragePath> {
    find_path_ids(index, cfg)
        .into_iter()
        .map(|ids| ArbitragePath::from_checked(ids.iter().map(|&id| index.get(id).clone()).collect()))
        .collect()
}

/// Positions of sequences that are not a contiguous part of another
/// sequence. Among identical sequences the first is kept.
pub(crate) fn maximal_positions<K: Hash + Eq>(seqs: &[Vec<K>]) -> Vec<usize> {
    let mut contained: HashSet<&[K]> = HashSet::new();
    for seq in seqs {
        for len in 1..seq.len() {
            for start in 0..=seq.len() - len {
                contained.insert(&seq[start..start + len]);
            }
        }
    }
    let mut seen: HashSet<&[K]> = HashSet::new();
    (0..seqs.len())
        .filter(|&i| {
            let seq = seqs[i].as_slice();
            !contained.contains(seq) && seen.insert(seq)
        })
        .collect()
}

/// Drops paths contained contiguously in another path, and duplicates.
/// Output is sorted by first timestamp, then first hash.
pub fn dedupe_maximal(paths: Vec<ArbitragePath>) -> Vec<ArbitragePath> {
    let keys: Vec<Vec<&str>> = paths.iter().map(ArbitragePath::hash_sequence).collect();
    let keep: HashSet<usize> = maximal_positions(&keys).into_iter().collect();
    let mut kept: Vec<ArbitragePath> = paths
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .map(|(_, p)| p)
        .collect();
    sort_paths(&mut kept);
    kept
}

pub(crate) fn sort_paths(paths: &mut [ArbitragePath]) {
    paths.sort_by(|a, b| {
        a.transactions()
            .iter()
            .map(TransactionRecord::order_key)
            .cmp(b.transactions().iter().map(TransactionRecord::order_key))
    });
}
