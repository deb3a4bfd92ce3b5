//! Fixed-capacity bitsets over vertex indices.

use std::fmt;

use smallvec::SmallVec;

const WORD_BITS: usize = 64;

type Words = SmallVec<[u64; 4]>;

/// A set of vertices `0..capacity`, stored as a bitset.
///
/// All sets taking part in a binary operation must have been created with the
/// same capacity (in practice: the vertex count of the graph they belong to).
/// Sets up to 256 vertices live inline without heap allocation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    words: Words,
}

#[inline]
fn word_count(capacity: usize) -> usize {
    capacity.div_ceil(WORD_BITS)
}

impl VertexSet {
    /// The empty set able to hold vertices `0..capacity`.
    pub fn new(capacity: usize) -> Self {
        VertexSet {
            words: SmallVec::from_elem(0, word_count(capacity)),
        }
    }

    /// The set `{0, .., capacity - 1}`.
    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        let rem = capacity % WORD_BITS;
        if rem != 0 {
            if let Some(last) = s.words.last_mut() {
                *last = (1u64 << rem) - 1;
            }
        }
        s
    }

    pub fn singleton(capacity: usize, v: usize) -> Self {
        let mut s = Self::new(capacity);
        s.insert(v);
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(capacity: usize, it: I) -> Self {
        let mut s = Self::new(capacity);
        for v in it {
            s.insert(v);
        }
        s
    }

    /// Number of vertex slots this set can address (rounded up to a word).
    pub fn word_capacity(&self) -> usize {
        self.words.len() * WORD_BITS
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v / WORD_BITS] |= 1 << (v % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        match self.words.get(v / WORD_BITS) {
            Some(w) => w & (1 << (v % WORD_BITS)) != 0,
            None => false,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest element, or `None` for the empty set.
    #[inline]
    pub fn min_vertex(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }

    /// `U ≺ W`: the minimum of `self` is smaller than the minimum of `other`.
    ///
    /// Panics when either set is empty.
    pub fn precedes(&self, other: &VertexSet) -> bool {
        let a = self.min_vertex().expect("precedes: empty set");
        let b = other.min_vertex().expect("precedes: empty set");
        a < b
    }

    #[inline]
    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.words.len(), other.words.len());
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= *b;
        }
    }

    #[inline]
    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.words.len(), other.words.len());
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= *b;
        }
    }

    #[inline]
    pub fn difference_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.words.len(), other.words.len());
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !*b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.intersect_with(other);
        r
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut r = self.clone();
        r.difference_with(other);
        r
    }

    #[inline]
    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn union_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Up to 64 membership bits starting at vertex `start`; bit `i` of the
    /// result is vertex `start + i`. Bits beyond `start + len` are cleared.
    #[inline]
    pub fn bits_at(&self, start: usize, len: usize) -> u64 {
        debug_assert!(len <= 64);
        if len == 0 {
            return 0;
        }
        let wi = start / WORD_BITS;
        let off = start % WORD_BITS;
        let lo = self.words.get(wi).copied().unwrap_or(0) >> off;
        let hi = if off == 0 {
            0
        } else {
            self.words.get(wi + 1).copied().unwrap_or(0) << (WORD_BITS - off)
        };
        let v = lo | hi;
        if len == 64 {
            v
        } else {
            v & ((1u64 << len) - 1)
        }
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn clear(&mut self) {
        for w in self.words.iter_mut() {
            *w = 0;
        }
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + tz);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
