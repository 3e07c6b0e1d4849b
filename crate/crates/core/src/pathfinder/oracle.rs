//! Exhaustive reference search.
//!
//! Shares nothing with the indexed search except the pairwise predicate: no
//! buckets, no time-range scans, no windowed dedupe. Each step scans the
//! whole record list.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::matcher::{phi, DetectionConfig};
use crate::model::{hops_for_len, path_shape_ok, ArbitragePath, TransactionRecord};

use super::{is_effective, sort_paths};

pub const MAX_ORACLE_RECORDS: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute-force search takes at most {limit} records, got {records}")]
    InputTooLarge { records: usize, limit: usize },
}

/// Reference implementation of the detector for small inputs.
pub fn brute_force_find(records: &[TransactionRecord], cfg: &DetectionConfig) -> Result<Vec<ArbitragePath>, OracleError> {
    if records.len() > MAX_ORACLE_RECORDS {
        return Err(OracleError::InputTooLarge {
            records: records.len(),
            limit: MAX_ORACLE_RECORDS,
        });
    }

    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut stack = Vec::with_capacity(cfg.max_len());
    for start in 0..records.len() {
        stack.clear();
        stack.push(start);
        walk(records, cfg, &mut stack, &mut found);
    }

    let candidates: Vec<Vec<TransactionRecord>> = found
        .into_iter()
        .map(|ids| ids.into_iter().map(|i| records[i].clone()).collect())
        .collect();

    let mut kept: Vec<ArbitragePath> = Vec::new();
    for (i, path) in candidates.iter().enumerate() {
        let key: Vec<&str> = path.iter().map(TransactionRecord::hash).collect();
        let subsumed = candidates.iter().enumerate().any(|(j, other)| {
            if i == j {
                return false;
            }
            let other_key: Vec<&str> = other.iter().map(TransactionRecord::hash).collect();
            if other_key.len() > key.len() {
                other_key.windows(key.len()).any(|w| w == key.as_slice())
            } else {
                // identical duplicates: keep the first occurrence
                other_key == key && j < i
            }
        });
        if !subsumed {
            kept.push(ArbitragePath::from_checked(path.clone()));
        }
    }
    sort_paths(&mut kept);
    Ok(kept)
}

fn admissible(records: &[TransactionRecord], stack: &[usize], cfg: &DetectionConfig) -> bool {
    let hops = hops_for_len(stack.len());
    if stack.len().is_multiple_of(2) || !(cfg.min_hops()..=cfg.max_hops()).contains(&hops) {
        return false;
    }
    let path: Vec<TransactionRecord> = stack.iter().map(|&i| records[i].clone()).collect();
    path_shape_ok(&path) && path.windows(2).all(|w| phi(&w[0], &w[1], cfg)) && is_effective(&path)
}

fn walk(records: &[TransactionRecord], cfg: &DetectionConfig, stack: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
    if admissible(records, stack, cfg) {
        found.push(stack.clone());
    }
    if stack.len() >= cfg.max_len() {
        return;
    }
    let last = &records[*stack.last().expect("non-empty")];
    for next in 0..records.len() {
        // The product over pairs is zero as soon as one pair fails, so
        // only phi-compatible successors can lead to a valid path.
        if !stack.contains(&next) && phi(last, &records[next], cfg) {
            stack.push(next);
            walk(records, cfg, stack, found);
            stack.pop();
        }
    }
}

/// Set difference between two result lists, keyed by hash sequence.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct OracleDiff {
    pub only_in_left: Vec<Vec<String>>,
    pub only_in_right: Vec<Vec<String>>,
}

impl OracleDiff {
    pub fn is_empty(&self) -> bool {
        self.only_in_left.is_empty() && self.only_in_right.is_empty()
    }
}

pub fn compare_results(left: &[ArbitragePath], right: &[ArbitragePath]) -> OracleDiff {
    let key = |p: &ArbitragePath| -> Vec<String> {
        p.hash_sequence().into_iter().map(String::from).collect()
    };
    let l: BTreeSet<Vec<String>> = left.iter().map(key).collect();
    let r: BTreeSet<Vec<String>> = right.iter().map(key).collect();
    OracleDiff {
        only_in_left: l.difference(&r).cloned().collect(),
        only_in_right: r.difference(&l).cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_support::swap;
    use crate::model::Chain;

    #[test]
    fn guard_rejects_large_inputs() {
        let recs: Vec<TransactionRecord> = (0..=MAX_ORACLE_RECORDS)
            .map(|i| swap(&format!("h{i}"), i as i64, "a", Chain::Base, "X", "Y", 1, 1))
            .collect();
        assert_eq!(
            brute_force_find(&recs, &DetectionConfig::default()),
            Err(OracleError::InputTooLarge {
                records: 2001,
                limit: 2000
            })
        );
        assert!(brute_force_find(&recs[..MAX_ORACLE_RECORDS], &DetectionConfig::default()).is_ok());
    }
}
