use std::sync::Arc;

use ahash::RandomState;
use dashmap::DashMap;

/// Concurrent string interner. Addresses and token symbols repeat heavily
/// across a dataset, so each distinct string is allocated once and shared.
#[derive(Debug, Default)]
pub struct Interner {
    strings: DashMap<Arc<str>, (), RandomState>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Interner {
            strings: DashMap::with_capacity_and_hasher(capacity, RandomState::new()),
        }
    }

    pub fn intern(&self, s: &str) -> Arc<str> {
        if let Some(entry) = self.strings.get(s) {
            return entry.key().clone();
        }
        self.strings.entry(Arc::from(s)).or_insert(()).key().clone()
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}
