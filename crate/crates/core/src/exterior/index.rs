use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Strictly increasing tuple of coordinate positions, stored as a bit set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(u64);

pub const MAX_DIM: usize = 64;

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds from strictly increasing positions.
    pub fn from_sorted(positions: &[usize]) -> Option<Self> {
        let mut bits = 0u64;
        let mut prev: Option<usize> = None;
        for &p in positions {
            if p >= MAX_DIM || prev.is_some_and(|q| q >= p) {
                return None;
            }
            bits |= 1 << p;
            prev = Some(p);
        }
        Some(MultiIndex(bits))
    }

    /// Sorts arbitrary positions, returning the canonical index and the sign of
    /// the sorting permutation, or `None` if a position repeats.
    pub fn from_unsorted(positions: &[usize]) -> Option<(Self, i32)> {
        let mut bits = 0u64;
        let mut sign = 1;
        for &p in positions {
            if p >= MAX_DIM || bits & (1 << p) != 0 {
                return None;
            }
            if (bits >> p).count_ones() % 2 == 1 {
                sign = -sign;
            }
            bits |= 1 << p;
        }
        Some((MultiIndex(bits), sign))
    }

    pub fn full(dim: usize) -> Self {
        if dim >= 64 {
            MultiIndex(u64::MAX)
        } else {
            MultiIndex((1u64 << dim) - 1)
        }
    }

    pub fn single(p: usize) -> Self {
        MultiIndex(1 << p)
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(&self, p: usize) -> bool {
        p < MAX_DIM && self.0 & (1 << p) != 0
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..MAX_DIM).filter(move |p| bits & (1 << p) != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.positions().collect()
    }

    /// Number of members strictly below `p`.
    pub fn count_below(&self, p: usize) -> usize {
        (self.0 & ((1u64 << p) - 1)).count_ones() as usize
    }

    pub fn without(&self, p: usize) -> Self {
        MultiIndex(self.0 & !(1 << p))
    }

    pub fn with(&self, p: usize) -> Self {
        MultiIndex(self.0 | (1 << p))
    }

    pub fn is_disjoint(&self, other: &MultiIndex) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0 | other.0)
    }

    pub fn complement(&self, dim: usize) -> Self {
        MultiIndex(MultiIndex::full(dim).0 & !self.0)
    }

    /// Sign of reordering `dx^self ∧ dx^other` into canonical order. The
    /// indices must be disjoint.
    pub fn shuffle_sign(&self, other: &MultiIndex) -> i32 {
        let inversions: usize = other.positions().map(|j| (self.0 >> j).count_ones() as usize).sum();
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Shifts every position up by `by`.
    pub fn shifted(&self, by: usize) -> Self {
        MultiIndex(self.0 << by)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.positions().cmp(other.positions())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.positions()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting_sign() {
        assert_eq!(MultiIndex::from_unsorted(&[1, 0]), Some((MultiIndex(0b11), -1)));
        assert_eq!(MultiIndex::from_unsorted(&[3, 0, 1, 2]).unwrap().1, -1);
        assert_eq!(MultiIndex::from_unsorted(&[2, 0, 1]).unwrap().1, 1);
        assert_eq!(MultiIndex::from_unsorted(&[0, 0]), None);
    }

    #[test]
    fn shuffle_sign_counts_inversions() {
        let a = MultiIndex::from_sorted(&[1, 3]).unwrap();
        let b = MultiIndex::from_sorted(&[0, 2]).unwrap();
        // (1,3,0,2): inversions (1,0),(3,0),(3,2)
        assert_eq!(a.shuffle_sign(&b), -1);
        // (0,2,1,3): one inversion
        assert_eq!(b.shuffle_sign(&a), -1);
    }

    #[test]
    fn lexicographic_order() {
        let i01 = MultiIndex::from_sorted(&[0, 1]).unwrap();
        let i02 = MultiIndex::from_sorted(&[0, 2]).unwrap();
        let i12 = MultiIndex::from_sorted(&[1, 2]).unwrap();
        assert!(i01 < i02 && i02 < i12);
        assert!(MultiIndex::from_sorted(&[1, 1]).is_none());
    }
}
