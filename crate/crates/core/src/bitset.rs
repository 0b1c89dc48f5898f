//! Fixed-width bitsets over demand-point indices.
//!
//! Masks up to 128 demand points live inline; wider instances spill to the
//! heap. There is no upper cap on the number of demand points.

use smallvec::SmallVec;
use std::fmt;

const WORD_BITS: usize = 64;

/// A set of demand-point indices, stored as little-endian 64-bit words.
///
/// Every set used within one instance has the same width (number of demand
/// points), so binary operations can work word by word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DemandSet {
    words: SmallVec<[u64; 2]>,
    len: usize,
}

impl DemandSet {
    /// Empty set able to hold indices `0..len`.
    pub fn new(len: usize) -> Self {
        let words = len.div_ceil(WORD_BITS);
        DemandSet {
            words: SmallVec::from_elem(0, words),
            len,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut set = DemandSet::new(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Capacity in bits (the number of demand points).
    pub fn width(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "demand index {i} out of range for width {}", self.len);
        self.words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD_BITS] & (1u64 << (i % WORD_BITS)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &DemandSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= *b;
        }
    }

    pub fn union(&self, other: &DemandSet) -> DemandSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &DemandSet) -> DemandSet {
        debug_assert_eq!(self.len, other.len);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= !*b;
        }
        out
    }

    pub fn is_subset(&self, other: &DemandSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &DemandSet) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &DemandSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    /// Set bits in ascending order.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for DemandSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}
