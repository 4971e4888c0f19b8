//! Color subsets of `[d]` stored as bitmasks.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest supported number of colors. Every routine enumerates subsets of
/// `[d]`, so this is far above what is practical anyway.
pub const MAX_COLORS: usize = 24;

/// A subset of colors `S ⊆ [d]`, bit `i` set iff color `i ∈ S`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorSet(u32);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        ColorSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// `[d] = {0, …, d-1}`.
    pub fn full(d: usize) -> Self {
        debug_assert!(d <= MAX_COLORS);
        if d == 0 {
            ColorSet(0)
        } else {
            ColorSet(u32::MAX >> (32 - d))
        }
    }

    pub fn singleton(color: usize) -> Self {
        ColorSet(1 << color)
    }

    pub fn from_colors<I: IntoIterator<Item = usize>>(colors: I) -> Self {
        ColorSet(colors.into_iter().fold(0, |acc, c| acc | (1 << c)))
    }

    pub fn contains(self, color: usize) -> bool {
        color < 32 && self.0 & (1 << color) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ColorSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ColorSet(self.0 & !other.0)
    }

    pub fn complement(self, d: usize) -> Self {
        ColorSet::full(d).difference(self)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn insert(self, color: usize) -> Self {
        ColorSet(self.0 | (1 << color))
    }

    pub fn remove(self, color: usize) -> Self {
        ColorSet(self.0 & !(1 << color))
    }

    /// Largest color + 1, or 0 for the empty set.
    pub fn span(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Colors in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> + Clone {
        let bits = self.0;
        (0..32).filter(move |&i| bits & (1 << i) != 0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Position of `color` among the members of the set (its rank).
    pub fn rank_of(self, color: usize) -> Option<usize> {
        self.contains(color)
            .then(|| (self.0 & ((1u32 << color) - 1)).count_ones() as usize)
    }

    /// All subsets of `self`, in increasing bitmask order (∅ first, `self` last).
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// All subsets of `[d]` in increasing bitmask order.
    pub fn all(d: usize) -> impl Iterator<Item = ColorSet> {
        (0..(1u32 << d)).map(ColorSet)
    }

    /// Re-index `self ⊆ within` into the coordinates of `within`, i.e. the
    /// set of ranks of the members of `self` inside `within`.
    pub fn relative_to(self, within: ColorSet) -> ColorSet {
        debug_assert!(self.is_subset(within));
        ColorSet::from_colors(self.iter().filter_map(|c| within.rank_of(c)))
    }

    /// Inverse of [`ColorSet::relative_to`].
    pub fn embed_into(self, within: ColorSet) -> ColorSet {
        let members = within.to_vec();
        ColorSet::from_colors(self.iter().map(|k| members[k]))
    }
}

/// Iterator over the subsets of a mask (Gosper-free submask enumeration).
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = ColorSet;

    fn next(&mut self) -> Option<ColorSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some(((cur | !self.mask).wrapping_add(1)) & self.mask)
        };
        Some(ColorSet(cur))
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, c) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// `(-1)^k` as a float.
pub(crate) fn sign_of_parity(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
