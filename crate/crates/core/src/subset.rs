//! Subsets of the ground set `[n] = {1, ..., n}` as bit vectors.
//!
//! Element `i` lives in bit `i - 1`. Subsets order by cardinality first and
//! numeric bit value second; every family in the crate is sorted this way.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Number of ground elements, `1 <= n <= 16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSize(u8);

impl GroundSize {
    pub const MAX: usize = 16;

    pub fn new(n: usize) -> Result<Self> {
        if (1..=Self::MAX).contains(&n) {
            Ok(GroundSize(n as u8))
        } else {
            Err(Error::GroundSize(n))
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Bit mask of the full ground set.
    #[inline]
    pub fn full_bits(self) -> u16 {
        ((1u32 << self.0) - 1) as u16
    }

    /// Number of subsets, `2^n`.
    #[inline]
    pub fn power_set_len(self) -> usize {
        1usize << self.0
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subset {
    bits: u16,
    n: GroundSize,
}

impl Subset {
    pub fn empty(n: GroundSize) -> Self {
        Subset { bits: 0, n }
    }

    pub fn full(n: GroundSize) -> Self {
        Subset {
            bits: n.full_bits(),
            n,
        }
    }

    pub fn from_bits(n: GroundSize, bits: u32) -> Result<Self> {
        if bits & !(n.full_bits() as u32) != 0 {
            return Err(Error::BitsOutOfRange { bits, n: n.get() });
        }
        Ok(Subset {
            bits: bits as u16,
            n,
        })
    }

    /// Builds a subset from 1-based element labels. Repeats are harmless.
    pub fn from_elements<I>(n: GroundSize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut bits = 0u16;
        for e in elements {
            if e == 0 || e > n.get() {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    n: n.get(),
                });
            }
            bits |= 1 << (e - 1);
        }
        Ok(Subset { bits, n })
    }

    /// The interval `{1, ..., k}`.
    pub fn prefix(n: GroundSize, k: usize) -> Result<Self> {
        if k > n.get() {
            return Err(Error::LevelOutOfRange { n: n.get(), k });
        }
        Ok(Subset {
            bits: ((1u32 << k) - 1) as u16,
            n,
        })
    }

    #[inline]
    pub fn bits(self) -> u16 {
        self.bits
    }

    #[inline]
    pub fn ground(self) -> GroundSize {
        self.n
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(self) -> bool {
        self.bits == self.n.full_bits()
    }

    #[inline]
    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.n.get() && self.bits & (1 << (element - 1)) != 0
    }

    /// Ascending 1-based element labels.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..16).filter(move |i| bits & (1 << i) != 0).map(|i| i + 1)
    }

    #[inline]
    fn same_ground(self, other: Subset) {
        assert_eq!(
            self.n, other.n,
            "subset operation across different ground sizes"
        );
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        self.same_ground(other);
        Subset {
            bits: self.bits | other.bits,
            n: self.n,
        }
    }

    #[inline]
    pub fn intersect(self, other: Subset) -> Subset {
        self.same_ground(other);
        Subset {
            bits: self.bits & other.bits,
            n: self.n,
        }
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.same_ground(other);
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_proper_subset_of(self, other: Subset) -> bool {
        self.is_subset_of(other) && self.bits != other.bits
    }

    #[inline]
    pub fn complement(self) -> Subset {
        Subset {
            bits: !self.bits & self.n.full_bits(),
            n: self.n,
        }
    }

    #[inline]
    pub fn with(self, element: usize) -> Subset {
        debug_assert!(element >= 1 && element <= self.n.get());
        Subset {
            bits: self.bits | (1 << (element - 1)),
            n: self.n,
        }
    }

    /// Text form used by the family format: `1,2,5` or `{}` for the empty set.
    pub fn to_line(self) -> String {
        if self.is_empty() {
            return "{}".to_string();
        }
        self.elements()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.len(), self.bits, self.n).cmp(&(other.len(), other.bits, other.n))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: usize) -> GroundSize {
        GroundSize::new(k).unwrap()
    }

    fn s(g: usize, els: &[usize]) -> Subset {
        Subset::from_elements(n(g), els.iter().copied()).unwrap()
    }

    #[test]
    fn lattice_ops() {
        assert_eq!(s(3, &[1]).union(s(3, &[2])), s(3, &[1, 2]));
        assert!(s(3, &[1]).is_subset_of(s(3, &[1, 2])));
        assert!(!s(3, &[1, 2]).is_subset_of(s(3, &[1])));
        assert_eq!(s(4, &[1, 2]).complement(), s(4, &[3, 4]));
        assert_eq!(s(4, &[1, 2]).intersect(s(4, &[2, 3])), s(4, &[2]));
        assert!(Subset::full(n(16)).is_full());
        assert_eq!(Subset::full(n(16)).len(), 16);
    }

    #[test]
    fn ground_size_bounds() {
        assert!(GroundSize::new(0).is_err());
        assert!(GroundSize::new(17).is_err());
        assert!(Subset::from_elements(n(3), [4]).is_err());
        assert!(Subset::from_elements(n(3), [0]).is_err());
        assert!(Subset::from_bits(n(3), 8).is_err());
    }

    #[test]
    #[should_panic]
    fn mismatched_ground_panics() {
        let _ = s(3, &[1]).union(s(4, &[1]));
    }

    #[test]
    fn order_is_size_then_value() {
        let mut v = vec![s(3, &[1, 2]), s(3, &[3]), s(3, &[]), s(3, &[1])];
        v.sort();
        assert_eq!(v, vec![s(3, &[]), s(3, &[1]), s(3, &[3]), s(3, &[1, 2])]);
    }

    #[test]
    fn text_forms() {
        assert_eq!(s(4, &[3, 1]).to_line(), "1,3");
        assert_eq!(s(4, &[]).to_line(), "{}");
        assert_eq!(s(4, &[2, 4]).to_string(), "{2,4}");
    }
}
