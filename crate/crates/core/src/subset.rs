//! Subsets of a ground set `[n] = {1, ..., n}` packed into a 64-bit mask.
//!
//! Element `i` lives in bit `i - 1`. Every module shares this convention, and
//! serialized forms always use the 1-based element numbers.

use std::fmt;

use crate::error::{Error, Result};

/// Widest ground set a [`Subset`] can represent.
pub const MAX_GROUND_SET: usize = 64;

/// Largest `n` for which all of `B_n` may be enumerated.
pub const ENUMERATION_LIMIT: usize = 28;

/// An element of a ranked poset.
pub trait Ranked {
    fn rank(&self) -> usize;
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// `[n]` itself.
    pub fn full(n: usize) -> Subset {
        Subset(low_mask(n))
    }

    pub fn singleton(x: u32) -> Subset {
        debug_assert!(x >= 1 && x as usize <= MAX_GROUND_SET);
        Subset(1u64 << (x - 1))
    }

    /// Builds a subset of `[n]` from 1-based elements, rejecting anything outside `[n]`.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I, n: usize) -> Result<Subset> {
        if n > MAX_GROUND_SET {
            return Err(Error::guard("ground set size", n as u128, MAX_GROUND_SET as u128));
        }
        let mut bits = 0u64;
        for x in elements {
            if x == 0 || x as usize > n {
                return Err(Error::ElementOutOfRange { element: x, n });
            }
            bits |= 1u64 << (x - 1);
        }
        Ok(Subset(bits))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, x: u32) -> bool {
        x >= 1 && (x as usize) <= MAX_GROUND_SET && self.0 >> (x - 1) & 1 == 1
    }

    #[inline]
    pub fn with(self, x: u32) -> Subset {
        Subset(self.0 | 1u64 << (x - 1))
    }

    #[inline]
    pub fn without(self, x: u32) -> Subset {
        Subset(self.0 & !(1u64 << (x - 1)))
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Complement relative to `[n]`.
    #[inline]
    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & low_mask(n))
    }

    /// True when no element beyond `n` is present.
    #[inline]
    pub fn fits(self, n: usize) -> bool {
        self.0 & !low_mask(n) == 0
    }

    pub fn min_element(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    pub fn max_element(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    /// Ascending 1-based elements.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// `b_1 b_2 ... b_n`, leftmost character is element 1.
    pub fn binary_string(self, n: usize) -> String {
        (1..=n as u32)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }
}

impl Ranked for Subset {
    #[inline]
    fn rank(&self) -> usize {
        self.len()
    }
}

/// `r(A) = |A|`.
pub fn rank(s: Subset) -> usize {
    s.len()
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(x + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u32], n: usize) -> Subset {
        Subset::from_elements(xs.iter().copied(), n).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(Subset::EMPTY), 0);
        assert_eq!(rank(set(&[1, 2, 3, 4], 4)), 4);
        assert_eq!(rank(set(&[1, 3], 4)), 2);
    }

    #[test]
    fn element_bit_convention() {
        let s = set(&[1, 3], 4);
        assert_eq!(s.bits(), 0b0101);
        assert_eq!(s.binary_string(4), "1010");
        assert_eq!(s.elements().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(Subset::EMPTY.to_string(), "{}");
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            Subset::from_elements([5], 4),
            Err(Error::ElementOutOfRange { element: 5, n: 4 })
        );
        assert!(Subset::from_elements([0], 4).is_err());
    }

    #[test]
    fn full_and_complement() {
        assert_eq!(Subset::full(64).len(), 64);
        assert_eq!(set(&[2], 3).complement(3), set(&[1, 3], 3));
        assert!(set(&[1, 2], 2).fits(2));
        assert!(!set(&[3], 3).fits(2));
        assert_eq!(set(&[2, 7], 8).max_element(), Some(7));
        assert_eq!(set(&[2, 7], 8).min_element(), Some(2));
    }
}
