//! Packed sets of boundary sites.

use std::fmt;

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A subset of `0..n`, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteSet {
    n: usize,
    words: Vec<u64>,
}

impl SiteSet {
    pub fn empty(n: usize) -> Self {
        SiteSet {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = SiteSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_sites<I: IntoIterator<Item = usize>>(n: usize, sites: I) -> Self {
        let mut s = SiteSet::empty(n);
        for i in sites {
            assert!(i < n, "site {i} out of range for {n} sites");
            s.insert(i);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.n && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn complement(&self) -> SiteSet {
        let mut out = SiteSet::empty(self.n);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o = !w;
        }
        out.trim();
        out
    }

    fn trim(&mut self) {
        let rem = self.n % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn union(&self, other: &SiteSet) -> SiteSet {
        debug_assert_eq!(self.n, other.n);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        SiteSet { n: self.n, words }
    }

    pub fn intersection(&self, other: &SiteSet) -> SiteSet {
        debug_assert_eq!(self.n, other.n);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        SiteSet { n: self.n, words }
    }

    pub fn difference(&self, other: &SiteSet) -> SiteSet {
        debug_assert_eq!(self.n, other.n);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        SiteSet { n: self.n, words }
    }

    pub fn is_subset(&self, other: &SiteSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &SiteSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }
}

impl fmt::Debug for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for SiteSet {
    /// Explicit-set syntax `{3,5,9}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_trims_high_bits() {
        let s = SiteSet::from_sites(70, [0, 69]);
        let c = s.complement();
        assert_eq!(c.len(), 68);
        assert!(!c.contains(69));
        assert_eq!(c.complement(), s);
    }

    #[test]
    fn iteration_is_sorted() {
        let s = SiteSet::from_sites(130, [128, 3, 64, 5]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 5, 64, 128]);
        assert_eq!(s.to_string(), "{3,5,64,128}");
    }
}
