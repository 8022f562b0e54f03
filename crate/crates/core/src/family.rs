//! Families of subsets, relabelings and canonical forms.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::subset::{GroundSize, Subset};

/// Largest ground size accepted by [`Family::canonical_form`], which scans all `n!` relabelings.
pub const CANONICAL_MAX_N: usize = 8;

/// A duplicate-free family of subsets of `[n]`, sorted by (cardinality, bit value).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    n: GroundSize,
    members: Vec<Subset>,
}

impl Family {
    pub fn empty(n: GroundSize) -> Family {
        Family {
            n,
            members: Vec::new(),
        }
    }

    /// Sorts and deduplicates. Every member must live on ground size `n`.
    pub fn new<I>(n: GroundSize, members: I) -> Result<Family>
    where
        I: IntoIterator<Item = Subset>,
    {
        let mut members: Vec<Subset> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|s| s.ground() != n) {
            return Err(Error::GroundSizeMismatch(n.get(), bad.ground().get()));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { n, members })
    }

    /// Convenience constructor from element lists, e.g. `&[&[], &[1], &[1, 2]]`.
    pub fn from_lists(n: usize, lists: &[&[usize]]) -> Result<Family> {
        let n = GroundSize::new(n)?;
        let members = lists
            .iter()
            .map(|l| Subset::from_elements(n, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Family::new(n, members)
    }

    /// Family of the subsets whose bit values are set in `mask` (bit `v` = subset with bits `v`).
    pub fn from_value_mask(n: GroundSize, mask: &[u64]) -> Family {
        let mut members = Vec::new();
        for (w, &word) in mask.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                let v = w * 64 + b;
                if v < n.power_set_len() {
                    members.push(Subset::from_bits(n, v as u32).expect("value below 2^n"));
                }
            }
        }
        members.sort_unstable();
        Family { n, members }
    }

    /// All subsets of `[n]`.
    pub fn power_set(n: GroundSize) -> Family {
        let members = (0..n.power_set_len() as u32)
            .map(|v| Subset::from_bits(n, v).expect("value below 2^n"))
            .collect();
        Family::sorted(n, members)
    }

    /// All `k`-subsets of `[n]`.
    pub fn level(n: GroundSize, k: usize) -> Result<Family> {
        if k > n.get() {
            return Err(Error::LevelOutOfRange { n: n.get(), k });
        }
        let members = (0..n.power_set_len() as u32)
            .filter(|v| v.count_ones() as usize == k)
            .map(|v| Subset::from_bits(n, v).expect("value below 2^n"))
            .collect();
        Ok(Family::sorted(n, members))
    }

    /// All `k`- and `(k+1)`-subsets of `[n]`.
    pub fn two_levels(n: GroundSize, k: usize) -> Result<Family> {
        if k + 1 > n.get() {
            return Err(Error::LevelOutOfRange { n: n.get(), k });
        }
        let mut members = Family::level(n, k)?.members;
        members.extend(Family::level(n, k + 1)?.members);
        Ok(Family::sorted(n, members))
    }

    fn sorted(n: GroundSize, mut members: Vec<Subset>) -> Family {
        members.sort_unstable();
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family { n, members }
    }

    #[inline]
    pub fn ground(&self) -> GroundSize {
        self.n
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n.get()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subset> {
        self.members.iter()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    pub fn contains_empty(&self) -> bool {
        self.members.first().is_some_and(|s| s.is_empty())
    }

    pub fn contains_full(&self) -> bool {
        self.members.last().is_some_and(|s| s.is_full())
    }

    /// Copy with `s` added (no-op if present).
    pub fn with(&self, s: Subset) -> Family {
        assert_eq!(s.ground(), self.n, "ground size mismatch");
        let mut members = self.members.clone();
        if let Err(pos) = members.binary_search(&s) {
            members.insert(pos, s);
        }
        Family { n: self.n, members }
    }

    /// Copy with `s` removed (no-op if absent).
    pub fn without(&self, s: Subset) -> Family {
        let mut members = self.members.clone();
        if let Ok(pos) = members.binary_search(&s) {
            members.remove(pos);
        }
        Family { n: self.n, members }
    }

    /// Members satisfying `keep`, in order.
    pub fn filter(&self, mut keep: impl FnMut(Subset) -> bool) -> Family {
        Family {
            n: self.n,
            members: self.members.iter().copied().filter(|&s| keep(s)).collect(),
        }
    }

    pub fn union(&self, other: &Family) -> Family {
        assert_eq!(self.n, other.n, "ground size mismatch");
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Family { n: self.n, members }
    }

    /// Number of members of each cardinality `0..=n`.
    pub fn level_profile(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n() + 1];
        for s in &self.members {
            counts[s.len()] += 1;
        }
        counts
    }

    /// Whether the family is exactly all `k`- and `(k+1)`-subsets for some `k`.
    pub fn is_two_consecutive_levels(&self) -> bool {
        (0..self.n()).any(|k| Family::two_levels(self.n, k).is_ok_and(|t| &t == self))
    }

    /// Family of complements of all members.
    pub fn complement_family(&self) -> Family {
        Family::sorted(
            self.n,
            self.members.iter().map(|s| s.complement()).collect(),
        )
    }

    /// Image of the family under a relabeling of `[n]`.
    pub fn apply_permutation(&self, perm: &Permutation) -> Result<Family> {
        if perm.len() != self.n() {
            return Err(Error::GroundSizeMismatch(self.n(), perm.len()));
        }
        Ok(self.apply_unchecked(perm))
    }

    fn apply_unchecked(&self, perm: &Permutation) -> Family {
        Family::sorted(
            self.n,
            self.members.iter().map(|&s| perm.apply(s)).collect(),
        )
    }

    /// Lexicographically least image over all `n!` relabelings, comparing member
    /// sequences in the fixed member order. Isomorphic families share a canonical form.
    pub fn canonical_form(&self) -> Result<Family> {
        let n = self.n();
        if n > CANONICAL_MAX_N {
            return Err(Error::TooLargeForCanonical {
                n,
                max: CANONICAL_MAX_N,
            });
        }
        let mut best: Option<Vec<Subset>> = None;
        let mut image = Vec::with_capacity(self.len());
        for perm in Permutation::all(n) {
            let table = perm.byte_table();
            image.clear();
            image.extend(self.members.iter().map(|s| {
                Subset::from_bits(self.n, table[s.bits() as usize] as u32).expect("in range")
            }));
            image.sort_unstable();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image.clone());
            }
        }
        Ok(Family {
            n: self.n,
            members: best.unwrap_or_default(),
        })
    }

    pub fn is_isomorphic(&self, other: &Family) -> Result<bool> {
        if self.n != other.n || self.len() != other.len() {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// Single-line form, e.g. `{} {1} {1,2}`.
    pub fn to_compact(&self) -> String {
        self.members
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a Subset;
    type IntoIter = std::slice::Iter<'a, Subset>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [{}]", self.n, self.to_compact())
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    members: Vec<Vec<usize>>,
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyJson {
            n: self.n(),
            members: self
                .members
                .iter()
                .map(|s| s.elements().collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = FamilyJson::deserialize(deserializer)?;
        let n = GroundSize::new(raw.n).map_err(D::Error::custom)?;
        let members = raw
            .members
            .into_iter()
            .map(|m| Subset::from_elements(n, m))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Family::new(n, members).map_err(D::Error::custom)
    }
}

/// A bijection of `[n]`, stored as `images[i - 1] = image of i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &i in &images {
            if i == 0 || i > n || seen[i] {
                return Err(Error::NotABijection(n));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (1..=n as u8).collect(),
        }
    }

    /// Transposition of `a` and `b` on `[n]`.
    pub fn swap(n: usize, a: usize, b: usize) -> Result<Permutation> {
        let mut images: Vec<usize> = (1..=n).collect();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::NotABijection(n));
        }
        images.swap(a - 1, b - 1);
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, element: usize) -> usize {
        self.images[element - 1] as usize
    }

    pub fn apply(&self, s: Subset) -> Subset {
        let mut bits = 0u32;
        for e in s.elements() {
            bits |= 1 << (self.image(e) - 1);
        }
        Subset::from_bits(s.ground(), bits).expect("permutation maps into [n]")
    }

    /// Image of every bit value below `2^n` (n <= 8).
    fn byte_table(&self) -> [u8; 256] {
        let mut table = [0u8; 256];
        for (v, slot) in table.iter_mut().enumerate().take(1 << self.len()) {
            let mut out = 0u8;
            for (i, &img) in self.images.iter().enumerate() {
                if v & (1 << i) != 0 {
                    out |= 1 << (img - 1);
                }
            }
            *slot = out;
        }
        table
    }

    /// All `n!` permutations in lexicographic order of their image vectors.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some((1..=n as u8).collect::<Vec<u8>>());
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            if next_lexicographic(&mut succ) {
                next = Some(succ);
            }
            Some(Permutation { images: current })
        })
    }
}

/// Advances `v` to its lexicographic successor; false when `v` was the last one.
pub(crate) fn next_lexicographic<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
