//! Fixed-universe bitsets over vertex ids.

use std::fmt;

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Iterates the set bits of a word slice in increasing order.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let tz = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD_BITS + tz)
        })
    })
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Clears the bits at positions `>= bits` in the last word.
#[inline]
pub(crate) fn mask_tail(words: &mut [u64], bits: usize) {
    let rem = bits % WORD_BITS;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// ORs the first `len` bits of `src` into `dst` starting at bit `offset`.
pub(crate) fn or_shifted(dst: &mut [u64], src: &[u64], offset: usize, len: usize) {
    let shift = offset % WORD_BITS;
    let base = offset / WORD_BITS;
    let src_words = words_for(len);
    for (i, &w) in src.iter().take(src_words).enumerate() {
        let mut w = w;
        if i == src_words - 1 {
            let rem = len % WORD_BITS;
            if rem != 0 {
                w &= (1u64 << rem) - 1;
            }
        }
        if w == 0 {
            continue;
        }
        dst[base + i] |= w << shift;
        if shift != 0 && base + i + 1 < dst.len() {
            dst[base + i + 1] |= w >> (WORD_BITS - shift);
        }
    }
}

/// A set of vertex ids drawn from `0..universe`, with a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
    count: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; words_for(universe)],
            count: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut words = vec![u64::MAX; words_for(universe)];
        mask_tail(&mut words, universe);
        VertexSet {
            universe,
            words,
            count: universe,
        }
    }

    /// Builds a set from ids; ids outside the universe are ignored.
    pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Self {
        let mut s = VertexSet::new(universe);
        for v in ids {
            if v < universe {
                s.insert(v);
            }
        }
        s
    }

    /// The ids `range.start..range.end`, clamped to the universe.
    pub fn range(universe: usize, range: std::ops::Range<usize>) -> Self {
        VertexSet::from_ids(universe, range)
    }

    pub(crate) fn from_words(universe: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(universe), 0);
        mask_tail(&mut words, universe);
        let count = popcount(&words);
        VertexSet {
            universe,
            words,
            count,
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    /// Inserts `v`, returning whether it was newly added.
    ///
    /// Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let w = &mut self.words[v / WORD_BITS];
        let bit = 1u64 << (v % WORD_BITS);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.count += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let w = &mut self.words[v / WORD_BITS];
        let bit = 1u64 << (v % WORD_BITS);
        let present = *w & bit != 0;
        *w &= !bit;
        self.count -= present as usize;
        present
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member `>= from`, if any.
    pub fn next_from(&self, from: usize) -> Option<usize> {
        if from >= self.universe {
            return None;
        }
        let mut wi = from / WORD_BITS;
        let mut w = self.words[wi] & (u64::MAX << (from % WORD_BITS));
        loop {
            if w != 0 {
                return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.next_from(0)
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        debug_assert_eq!(self.universe, other.universe);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        VertexSet::from_words(self.universe, words)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> VertexSet {
        let words = self.words.iter().map(|w| !w).collect();
        VertexSet::from_words(self.universe, words)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.count = popcount(&self.words);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.count = popcount(&self.words);
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_track_count() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(64));
        assert!(s.insert(129));
        assert!(!s.insert(64));
        assert_eq!(s.len(), 3);
        assert!(s.remove(64));
        assert!(!s.remove(64));
        assert_eq!(s.to_vec(), vec![0, 129]);
    }

    #[test]
    fn full_and_complement_respect_universe() {
        let f = VertexSet::full(70);
        assert_eq!(f.len(), 70);
        assert!(f.complement().is_empty());
        let s = VertexSet::from_ids(70, [1, 69]);
        assert_eq!(s.complement().len(), 68);
    }

    #[test]
    fn next_from_crosses_words() {
        let s = VertexSet::from_ids(200, [3, 150]);
        assert_eq!(s.next_from(4), Some(150));
        assert_eq!(s.next_from(151), None);
        assert_eq!(s.first(), Some(3));
    }

    #[test]
    fn or_shifted_places_bits() {
        for offset in [0usize, 5, 63, 64, 70] {
            let len = 67;
            let src = VertexSet::from_ids(len, [0, 1, 40, 63, 64, 66]);
            let mut dst = vec![0u64; words_for(offset + len)];
            or_shifted(&mut dst, src.words(), offset, len);
            let got: Vec<usize> = ones(&dst).collect();
            let want: Vec<usize> = src.iter().map(|v| v + offset).collect();
            assert_eq!(got, want, "offset {offset}");
        }
    }
}
