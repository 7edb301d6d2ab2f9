//! Bitmask sets over a base of at most 64 points.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

/// Largest supported base.
pub const MAX_POINTS: usize = 64;

/// A set of point indices packed into a `u64`.
///
/// The derived ordering compares the raw masks, which is the order used
/// whenever sets need a deterministic enumeration.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_POINTS);
        PointSet(1 << i)
    }

    /// `{0, .., n-1}`
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_POINTS && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn with(self, i: usize) -> Self {
        PointSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        PointSet(self.0 & !(1 << i))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: PointSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            of: self.0,
            next: Some(0),
        }
    }

    /// Render with point names, e.g. `{a,c}`.
    pub fn show(self, names: &[String]) -> String {
        let mut s = String::from("{");
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            match names.get(i) {
                Some(n) => s.push_str(n),
                None => s.push_str(&format!("#{i}")),
            }
        }
        s.push('}');
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 | rhs.0)
    }
}

impl BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & rhs.0)
    }
}

impl Sub for PointSet {
    type Output = PointSet;
    fn sub(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & !rhs.0)
    }
}

impl Not for PointSet {
    type Output = PointSet;
    fn not(self) -> PointSet {
        PointSet(!self.0)
    }
}

impl std::ops::BitOrAssign for PointSet {
    fn bitor_assign(&mut self, rhs: PointSet) {
        self.0 |= rhs.0;
    }
}

impl std::ops::BitAndAssign for PointSet {
    fn bitand_assign(&mut self, rhs: PointSet) {
        self.0 &= rhs.0;
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl IntoIterator for PointSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    of: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = PointSet;
    fn next(&mut self) -> Option<PointSet> {
        let cur = self.next?;
        // standard submask walk, ascending
        self.next = if cur == self.of {
            None
        } else {
            Some((cur | !self.of).wrapping_add(1) & self.of)
        };
        Some(PointSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_and_len_agree() {
        let s: PointSet = [0, 3, 5, 63].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 5, 63]);
        assert_eq!(s.len(), 4);
        assert!(s.contains(63));
        assert!(!s.contains(64));
    }

    #[test]
    fn subsets_of_three() {
        let s = PointSet::from_bits(0b1011);
        let subs: Vec<u64> = s.subsets().map(|x| x.bits()).collect();
        assert_eq!(subs, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(PointSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn show_uses_names() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        assert_eq!(PointSet::from_bits(0b101).show(&names), "{a,c}");
        assert_eq!(PointSet::EMPTY.show(&names), "{}");
    }

    #[test]
    fn full_edges() {
        assert_eq!(PointSet::full(0), PointSet::EMPTY);
        assert_eq!(PointSet::full(64).len(), 64);
    }
}
