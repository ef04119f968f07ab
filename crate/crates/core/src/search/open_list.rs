use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::grid::ExactCost;

/// Selection key: lower `h`, then lower `g`, then earlier insertion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenKey {
    pub h: f64,
    pub g: ExactCost,
    pub seq: u64,
}

impl Eq for OpenKey {}

impl Ord for OpenKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.h
            .total_cmp(&other.h)
            .then_with(|| self.g.cmp(&other.g))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for OpenKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Priority list with at most one entry per cell index.
///
/// Re-keyed entries leave their old heap slot behind; stale slots are
/// skipped on `pop` by comparing against the live key.
#[derive(Debug, Clone)]
pub struct OpenList {
    heap: BinaryHeap<Reverse<(OpenKey, usize)>>,
    live: Vec<Option<OpenKey>>,
    len: usize,
}

impl OpenList {
    pub fn new(cell_count: usize) -> Self {
        OpenList {
            heap: BinaryHeap::new(),
            live: vec![None; cell_count],
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.live[idx].is_some()
    }

    pub fn key(&self, idx: usize) -> Option<OpenKey> {
        self.live[idx]
    }

    /// Inserts a cell that is not yet present.
    pub fn insert(&mut self, idx: usize, key: OpenKey) {
        debug_assert!(self.live[idx].is_none(), "cell {idx} already open");
        self.live[idx] = Some(key);
        self.len += 1;
        self.heap.push(Reverse((key, idx)));
    }

    /// Replaces the key of a present cell.
    pub fn rekey(&mut self, idx: usize, key: OpenKey) {
        debug_assert!(self.live[idx].is_some(), "cell {idx} not open");
        self.live[idx] = Some(key);
        self.heap.push(Reverse((key, idx)));
    }

    pub fn pop(&mut self) -> Option<usize> {
        while let Some(Reverse((key, idx))) = self.heap.pop() {
            if self.live[idx] == Some(key) {
                self.live[idx] = None;
                self.len -= 1;
                return Some(idx);
            }
        }
        None
    }

    pub fn clear(&mut self) {
        self.heap.clear();
        self.live.iter_mut().for_each(|k| *k = None);
        self.len = 0;
    }
}
