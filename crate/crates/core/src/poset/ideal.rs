use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// A subset of `{1..n}` stored as a bitmask, bit `i - 1` standing for label `i`.
///
/// Used for order ideals, connected ideals and arbitrary subsets alike. The
/// ordering is by cardinality first and bitmask value second, which is the
/// canonical order used for every list this crate returns.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IdealSet(u64);

impl IdealSet {
    pub const EMPTY: IdealSet = IdealSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        IdealSet(bits)
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        let mut bits = 0u64;
        for l in labels {
            debug_assert!((1..=64).contains(&l));
            bits |= 1 << (l - 1);
        }
        IdealSet(bits)
    }

    pub fn singleton(label: usize) -> Self {
        IdealSet(1 << (label - 1))
    }

    /// The full set `{1..n}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            IdealSet(u64::MAX)
        } else {
            IdealSet((1u64 << n) - 1)
        }
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=64).contains(&label) && self.0 & (1 << (label - 1)) != 0
    }

    pub fn with(self, label: usize) -> Self {
        IdealSet(self.0 | 1 << (label - 1))
    }

    pub fn without(self, label: usize) -> Self {
        IdealSet(self.0 & !(1 << (label - 1)))
    }

    pub fn union(self, other: Self) -> Self {
        IdealSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IdealSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IdealSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Disjoint or nested.
    pub fn intersects_trivially(self, other: Self) -> bool {
        !self.intersects(other) || self.is_subset(other) || other.is_subset(self)
    }

    pub fn min_label(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// Labels in increasing order.
    pub fn labels(self) -> Labels {
        Labels(self.0)
    }

    /// 0/1 characteristic vector of length `n`.
    pub fn indicator(self, n: usize) -> Vec<u32> {
        (1..=n).map(|l| u32::from(self.contains(l))).collect()
    }

    /// Member labels concatenated, e.g. `1256`, or joined with underscores
    /// when `separated` (`1_2_12`).
    pub fn label_string(self, separated: bool) -> String {
        let parts: Vec<String> = self.labels().map(|l| l.to_string()).collect();
        if separated {
            parts.join("_")
        } else {
            parts.concat()
        }
    }
}

pub struct Labels(u64);

impl Iterator for Labels {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Labels {}

impl Ord for IdealSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IdealSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IdealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IdealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.labels().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for IdealSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.labels())
    }
}
