//! Fixed-universe bitsets over the elements `1..=n`.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD: usize = 64;

type Words = SmallVec<[u64; 2]>;

fn word_count(universe: usize) -> usize {
    universe.div_ceil(WORD)
}

/// A subset of `[n] = {1, .., n}`.
///
/// Elements are 1-based everywhere in the public API. Sets over universes up
/// to 128 elements live inline; larger universes spill to the heap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    universe: usize,
    words: Words,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        let mut words = Words::new();
        words.resize(word_count(universe), 0);
        ElementSet { universe, words }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let hi = (lo + WORD).min(universe);
            let bits = hi - lo;
            *w = if bits == WORD { u64::MAX } else { (1u64 << bits) - 1 };
        }
        s
    }

    /// Builds a set from 1-based elements, rejecting anything outside `1..=universe`.
    pub fn try_from_elements<I>(universe: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(universe);
        for x in elements {
            if x == 0 || x > universe {
                return Err(Error::ElementOutOfRange { element: x, n: universe });
            }
            s.insert(x);
        }
        Ok(s)
    }

    /// Panicking variant of [`ElementSet::try_from_elements`].
    pub fn from_elements<I>(universe: usize, elements: I) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        Self::try_from_elements(universe, elements).expect("element outside universe")
    }

    /// The first `k` elements `{1, .., k}`.
    pub fn prefix(universe: usize, k: usize) -> Self {
        Self::from_elements(universe, 1..=k.min(universe))
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        debug_assert!(x >= 1 && x <= self.universe);
        let i = x - 1;
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        assert!(x >= 1 && x <= self.universe, "element {x} outside [1, {}]", self.universe);
        let i = x - 1;
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        assert!(x >= 1 && x <= self.universe, "element {x} outside [1, {}]", self.universe);
        let i = x - 1;
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &Self) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> Self {
        Self::full(self.universe).difference(self)
    }

    #[inline]
    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    #[inline]
    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    #[inline]
    pub fn difference_with(&mut self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Whether `self` and `other` have the same members inside `mask`.
    #[inline]
    pub fn agrees_within(&self, other: &Self, mask: &Self) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).zip(&mask.words).all(|((a, b), m)| (a ^ b) & m == 0)
    }

    /// Ascending 1-based elements.
    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, word: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Same members embedded in a larger (or equal) universe.
    pub fn widen(&self, universe: usize) -> Self {
        assert!(universe >= self.universe);
        let mut out = Self::empty(universe);
        for (a, b) in out.words.iter_mut().zip(&self.words) {
            *a = *b;
        }
        out
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * WORD + bit + 1);
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word];
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Calls `visit` with every `k`-combination of `0..len` in lexicographic order.
/// Stops early and returns the first `Some` produced.
pub(crate) fn find_combination<R>(len: usize, k: usize, mut visit: impl FnMut(&[usize]) -> Option<R>) -> Option<R> {
    if k > len {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(r) = visit(&idx) {
            return Some(r);
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + len - k {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All `k`-combinations of `0..len`, lexicographic.
pub(crate) fn combinations(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    find_combination::<()>(len, k, |c| {
        out.push(c.to_vec());
        None
    });
    out
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<ElementSet> {
    let mut out = Vec::new();
    find_combination::<()>(n, k, |c| {
        out.push(ElementSet::from_elements(n, c.iter().map(|&i| i + 1)));
        None
    });
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
