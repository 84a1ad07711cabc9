//! Subsets of a poset carrier, stored as bitsets over internal indices.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

/// A set of internal element indices.
///
/// Equality, ordering and hashing depend only on the members, never on the
/// allocated capacity, so sets built against different carrier sizes still
/// compare correctly. The order is lexicographic on the sorted member list.
#[derive(Clone, Default)]
pub struct ElemSet {
    bits: FixedBitSet,
}

impl ElemSet {
    pub fn new(capacity: usize) -> Self {
        ElemSet {
            bits: FixedBitSet::with_capacity(capacity),
        }
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        ElemSet { bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(capacity: usize, indices: I) -> Self {
        let mut s = ElemSet::new(capacity);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Decode a bitmask (bit `i` set means index `i` is a member).
    pub fn from_mask(capacity: usize, mask: u64) -> Self {
        let mut s = ElemSet::new(capacity.max(64 - mask.leading_zeros() as usize));
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            s.insert(i);
            m &= m - 1;
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, i: usize) {
        if i >= self.bits.len() {
            self.bits.grow(i + 1);
        }
        self.bits.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.bits.len() {
            self.bits.set(i, false);
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    fn aligned(&self, other: &ElemSet) -> (FixedBitSet, FixedBitSet) {
        let n = self.bits.len().max(other.bits.len());
        let mut a = self.bits.clone();
        let mut b = other.bits.clone();
        a.grow(n);
        b.grow(n);
        (a, b)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let (mut a, b) = self.aligned(other);
        a.union_with(&b);
        ElemSet { bits: a }
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let (mut a, b) = self.aligned(other);
        a.intersect_with(&b);
        ElemSet { bits: a }
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let (mut a, b) = self.aligned(other);
        a.difference_with(&b);
        ElemSet { bits: a }
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        if other.bits.len() > self.bits.len() {
            self.bits.grow(other.bits.len());
        }
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &ElemSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        if self.bits.len() <= other.bits.len() {
            self.bits.is_disjoint(&other.bits)
        } else {
            other.bits.is_disjoint(&self.bits)
        }
    }

    pub fn intersects(&self, other: &ElemSet) -> bool {
        !self.is_disjoint(other)
    }
}

impl PartialEq for ElemSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for ElemSet {}

impl Hash for ElemSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for i in self.iter() {
            i.hash(state);
        }
        usize::MAX.hash(state);
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElemSet::from_indices(0, iter)
    }
}
