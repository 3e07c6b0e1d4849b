use std::collections::HashMap;
use std::sync::Arc;

use ahash::RandomState;
use rayon::prelude::*;

use crate::model::{Chain, TransactionRecord};

pub type RecordId = u32;

type ActorId = u32;

/// Read-only lookup structure for the path search.
///
/// Records are stored once, ordered by `(timestamp, hash)`; a record's id is
/// its position in that order, so ids compare like timestamps.
///
/// * sender buckets: every record, keyed by `(chain, sender)`.
/// * receiver buckets: bridges only, keyed by `(dest_chain, receiver)`.
///
/// Each address gets a dense id; a bucket key packs chain and address id
/// into a `u64`. Buckets are runs of one sorted id array, so a bucket lookup
/// is a hash probe plus a binary search and every bucket is time-sorted.
#[derive(Debug, Default)]
pub struct TxIndex {
    records: Vec<TransactionRecord>,
    actors: HashMap<Arc<str>, ActorId, RandomState>,
    names: Vec<Arc<str>>,
    by_sender_chain: Buckets,
    by_receiver_chain: Buckets,
}

#[derive(Debug, Default)]
struct Buckets {
    keys: Vec<u64>,
    /// `ids[starts[k]..starts[k + 1]]` is the bucket for `keys[k]`.
    starts: Vec<u32>,
    ids: Vec<RecordId>,
}

fn key(chain: Chain, actor: ActorId) -> u64 {
    (chain.index() as u64) << 32 | actor as u64
}

impl Buckets {
    fn build(mut pairs: Vec<(u64, RecordId)>) -> Self {
        // Pairs arrive in id order, so a stable sort on the key keeps each
        // bucket time-sorted.
        pairs.par_sort_by_key(|&(k, _)| k);
        let mut keys = Vec::new();
        let mut starts = Vec::new();
        let mut ids = Vec::with_capacity(pairs.len());
        for (i, &(k, id)) in pairs.iter().enumerate() {
            if keys.last() != Some(&k) {
                keys.push(k);
                starts.push(i as u32);
            }
            ids.push(id);
        }
        starts.push(ids.len() as u32);
        Buckets { keys, starts, ids }
    }

    fn get(&self, k: u64) -> &[RecordId] {
        match self.keys.binary_search(&k) {
            Ok(pos) => &self.ids[self.starts[pos] as usize..self.starts[pos + 1] as usize],
            Err(_) => &[],
        }
    }

    fn iter(&self) -> impl Iterator<Item = (u64, &[RecordId])> {
        self.keys.iter().enumerate().map(move |(pos, &k)| {
            (k, &self.ids[self.starts[pos] as usize..self.starts[pos + 1] as usize])
        })
    }
}

/// Builds the index. The result does not depend on input order.
pub fn build_index(mut records: Vec<TransactionRecord>) -> TxIndex {
    assert!(
        records.len() < RecordId::MAX as usize,
        "index holds at most {} records",
        RecordId::MAX
    );
    records.par_sort_unstable_by(|a, b| a.order_key().cmp(&b.order_key()));

    let mut actors: HashMap<Arc<str>, ActorId, RandomState> =
        HashMap::with_capacity_and_hasher(records.len(), RandomState::new());
    let mut names: Vec<Arc<str>> = Vec::new();
    let mut id_of = |addr: &Arc<str>| -> ActorId {
        if let Some(&id) = actors.get(&**addr) {
            return id;
        }
        let id = names.len() as ActorId;
        actors.insert(addr.clone(), id);
        names.push(addr.clone());
        id
    };

    let mut sent = Vec::with_capacity(records.len());
    let mut delivered = Vec::new();
    for (id, rec) in records.iter().enumerate() {
        let id = id as RecordId;
        let sender = id_of(rec.sender_arc());
        sent.push((key(rec.chain(), sender), id));
        if let Some(dest) = rec.dest_chain() {
            let receiver = if rec.receiver_arc() == rec.sender_arc() {
                sender
            } else {
                id_of(rec.receiver_arc())
            };
            delivered.push((key(dest, receiver), id));
        }
    }
    actors.shrink_to_fit();
    TxIndex {
        records,
        actors,
        names,
        by_sender_chain: Buckets::build(sent),
        by_receiver_chain: Buckets::build(delivered),
    }
}

impl TxIndex {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[TransactionRecord] {
        &self.records
    }

    pub fn get(&self, id: RecordId) -> &TransactionRecord {
        &self.records[id as usize]
    }

    pub fn into_records(self) -> Vec<TransactionRecord> {
        self.records
    }

    /// All records sent by `sender` on `chain`, oldest first.
    pub fn sender_bucket(&self, sender: &str, chain: Chain) -> &[RecordId] {
        match self.actors.get(sender) {
            Some(&a) => self.by_sender_chain.get(key(chain, a)),
            None => &[],
        }
    }

    /// Bridges delivering to `receiver` on `chain`, oldest first.
    pub fn receiver_bucket(&self, receiver: &str, chain: Chain) -> &[RecordId] {
        match self.actors.get(receiver) {
            Some(&a) => self.by_receiver_chain.get(key(chain, a)),
            None => &[],
        }
    }

    /// Slice of `bucket` with timestamps in `(after, until]`.
    pub fn time_range<'a>(&self, bucket: &'a [RecordId], after: i64, until: i64) -> &'a [RecordId] {
        let start = bucket.partition_point(|&id| self.get(id).timestamp() <= after);
        let end = start + bucket[start..].partition_point(|&id| self.get(id).timestamp() <= until);
        &bucket[start..end]
    }

    /// Records sent by `sender` on `chain` with timestamps in `(after, until]`.
    pub fn sent_between(&self, sender: &str, chain: Chain, after: i64, until: i64) -> &[RecordId] {
        self.time_range(self.sender_bucket(sender, chain), after, until)
    }

    /// Bridges delivering to `receiver` on `chain` with timestamps in
    /// `(after, until]`.
    pub fn delivered_between(&self, receiver: &str, chain: Chain, after: i64, until: i64) -> &[RecordId] {
        self.time_range(self.receiver_bucket(receiver, chain), after, until)
    }

    /// Looks a record up through its own sender bucket.
    pub fn find(&self, sender: &str, chain: Chain, timestamp: i64, hash: &str) -> Option<RecordId> {
        self.sent_between(sender, chain, timestamp - 1, timestamp)
            .iter()
            .copied()
            .find(|&id| self.get(id).hash() == hash)
    }

    /// `(sender, chain)` bucket count and `(receiver, dest_chain)` bucket
    /// count.
    pub fn bucket_counts(&self) -> (usize, usize) {
        (self.by_sender_chain.keys.len(), self.by_receiver_chain.keys.len())
    }

    /// Every `(chain, sender)` bucket.
    pub fn sender_buckets(&self) -> impl Iterator<Item = (Chain, &str, &[RecordId])> {
        self.named(&self.by_sender_chain)
    }

    /// Every `(dest_chain, receiver)` bucket.
    pub fn receiver_buckets(&self) -> impl Iterator<Item = (Chain, &str, &[RecordId])> {
        self.named(&self.by_receiver_chain)
    }

    fn named<'a>(&'a self, b: &'a Buckets) -> impl Iterator<Item = (Chain, &'a str, &'a [RecordId])> {
        b.iter().map(move |(k, ids)| {
            let chain = Chain::ALL[(k >> 32) as usize];
            (chain, &*self.names[(k & u32::MAX as u64) as usize], ids)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_support::{bridge, swap};

    #[test]
    fn empty_input() {
        let idx = build_index(Vec::new());
        assert!(idx.is_empty());
        assert_eq!(idx.bucket_counts(), (0, 0));
    }

    #[test]
    fn buckets_sorted_by_time() {
        let idx = build_index(vec![
            swap("late", 5, "a", Chain::Base, "X", "Y", 1, 1),
            swap("early", 3, "a", Chain::Base, "X", "Y", 1, 1),
        ]);
        let ts: Vec<i64> = idx
            .sender_bucket("a", Chain::Base)
            .iter()
            .map(|&id| idx.get(id).timestamp())
            .collect();
        assert_eq!(ts, vec![3, 5]);
    }

    #[test]
    fn roles_and_range_queries() {
        let idx = build_index(vec![
            swap("s1", 0, "a", Chain::Base, "X", "Y", 1, 1),
            bridge("b1", 10, "a", "r", Chain::Base, Chain::Ethereum, "Y", 1, 1),
            bridge("b2", 20, "a", "r", Chain::Base, Chain::Ethereum, "Y", 1, 1),
            swap("s2", 30, "r", Chain::Ethereum, "Y", "X", 1, 1),
        ]);
        assert_eq!(idx.sender_bucket("a", Chain::Base).len(), 3);
        assert_eq!(idx.receiver_bucket("r", Chain::Ethereum).len(), 2);
        assert!(idx.receiver_bucket("r", Chain::Base).is_empty());
        assert_eq!(idx.sender_bucket("r", Chain::Ethereum).len(), 1);

        let hits = idx.sent_between("a", Chain::Base, 0, 20);
        let hashes: Vec<&str> = hits.iter().map(|&id| idx.get(id).hash()).collect();
        assert_eq!(hashes, vec!["b1", "b2"]);
        assert!(idx.sent_between("a", Chain::Base, 20, 100).is_empty());
        assert_eq!(idx.delivered_between("r", Chain::Ethereum, 10, 10).len(), 0);
        assert_eq!(idx.delivered_between("r", Chain::Ethereum, 9, 10).len(), 1);
        assert!(idx.find("a", Chain::Base, 20, "b2").is_some());
        assert!(idx.find("a", Chain::Base, 21, "b2").is_none());
    }
}
