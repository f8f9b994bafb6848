//! Boundary regions on the cyclic boundary `0..n`.
//!
//! Boundary qubits of a code are numbered in their cyclic order, so a
//! connected region is a cyclic interval of indices.

use std::fmt;

use crate::error::{Error, Result};
use crate::sites::SiteSet;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    sites: SiteSet,
    /// `(start, len)` when the sites form one cyclic interval.
    interval: Option<(usize, usize)>,
}

impl Region {
    pub fn empty(n: usize) -> Self {
        Region {
            sites: SiteSet::empty(n),
            interval: Some((0, 0)),
        }
    }

    pub fn full(n: usize) -> Self {
        Region {
            sites: SiteSet::full(n),
            interval: Some((0, n)),
        }
    }

    /// Cyclic interval of `len` sites starting at `start`.
    pub fn interval(n: usize, start: usize, len: usize) -> Self {
        assert!(len <= n && (n == 0 || start < n), "interval out of range");
        if len == n {
            return Region::full(n);
        }
        let mut sites = SiteSet::empty(n);
        for k in 0..len {
            sites.insert((start + k) % n);
        }
        Region {
            sites,
            interval: Some(if len == 0 { (0, 0) } else { (start, len) }),
        }
    }

    pub fn from_set(sites: SiteSet) -> Self {
        let interval = detect_interval(&sites);
        Region { sites, interval }
    }

    pub fn from_sites<I: IntoIterator<Item = usize>>(n: usize, sites: I) -> Self {
        Region::from_set(SiteSet::from_sites(n, sites))
    }

    pub fn n(&self) -> usize {
        self.sites.n()
    }

    pub fn sites(&self) -> &SiteSet {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.sites.contains(i)
    }

    pub fn connected(&self) -> bool {
        self.interval.is_some()
    }

    pub fn as_interval(&self) -> Option<(usize, usize)> {
        self.interval
    }

    pub fn complement(&self) -> Region {
        let sites = self.sites.complement();
        let n = self.n();
        let interval = match self.interval {
            Some((_, 0)) => Some((0, n)),
            Some((_, len)) if len == n => Some((0, 0)),
            Some((start, len)) => Some(((start + len) % n, n - len)),
            None => None,
        };
        Region { sites, interval }
    }

    pub fn union(&self, other: &Region) -> Region {
        Region::from_set(self.sites.union(&other.sites))
    }

    pub fn intersection(&self, other: &Region) -> Region {
        Region::from_set(self.sites.intersection(&other.sites))
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.sites.is_subset(&other.sites)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.sites.iter()
    }

    /// All sites within cyclic distance `d` of the region.
    pub fn ball(&self, d: usize) -> Region {
        let n = self.n();
        if d == 0 || self.is_empty() {
            return self.clone();
        }
        if 2 * d + 1 >= n {
            return Region::full(n);
        }
        if let Some((start, len)) = self.interval {
            let new_len = (len + 2 * d).min(n);
            return Region::interval(n, (start + n - d) % n, new_len);
        }
        let mut out = self.sites.clone();
        for i in self.sites.iter() {
            for k in 1..=d {
                out.insert((i + k) % n);
                out.insert((i + n - k) % n);
            }
        }
        Region::from_set(out)
    }

    /// Parse `a..b` (inclusive cyclic interval, wrapping when `a > b`),
    /// `{3,5,9}`, `{}` or `all`.
    pub fn parse(s: &str, n: usize) -> Result<Region> {
        let s = s.trim();
        let bad = |col: usize, msg: String| Error::parse(1, col, msg);
        if s == "all" {
            return Ok(Region::full(n));
        }
        if let Some(body) = s.strip_prefix('{') {
            let body = body
                .strip_suffix('}')
                .ok_or_else(|| bad(s.len(), "missing closing '}'".into()))?;
            let mut set = SiteSet::empty(n);
            let mut col = 2;
            for part in body.split(',') {
                let t = part.trim();
                if !t.is_empty() {
                    let i: usize = t
                        .parse()
                        .map_err(|_| bad(col, format!("expected a site index, found {t:?}")))?;
                    if i >= n {
                        return Err(bad(col, format!("site {i} out of range for {n} sites")));
                    }
                    set.insert(i);
                }
                col += part.len() + 1;
            }
            return Ok(Region::from_set(set));
        }
        if let Some((a, b)) = s.split_once("..") {
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| bad(1, format!("expected interval start, found {a:?}")))?;
            let b: usize = b
                .trim()
                .parse()
                .map_err(|_| bad(s.find("..").unwrap() + 3, format!("expected interval end, found {b:?}")))?;
            if a >= n || b >= n {
                return Err(bad(1, format!("interval {a}..{b} out of range for {n} sites")));
            }
            let len = (b + n - a) % n + 1;
            return Ok(Region::interval(n, a, len));
        }
        let i: usize = s
            .parse()
            .map_err(|_| bad(1, format!("expected a region like 3..17 or {{3,5,9}}, found {s:?}")))?;
        if i >= n {
            return Err(bad(1, format!("site {i} out of range for {n} sites")));
        }
        Ok(Region::interval(n, i, 1))
    }
}

fn detect_interval(sites: &SiteSet) -> Option<(usize, usize)> {
    let n = sites.n();
    let len = sites.len();
    if len == 0 {
        return Some((0, 0));
    }
    if len == n {
        return Some((0, n));
    }
    let mut start = None;
    for i in sites.iter() {
        if !sites.contains((i + n - 1) % n) {
            if start.is_some() {
                return None;
            }
            start = Some(i);
        }
    }
    start.map(|s| (s, len))
}

impl fmt::Display for Region {
    /// Interval syntax `a..b` for connected regions, `{..}` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        match self.interval {
            Some((start, len)) if len > 0 => write!(f, "{}..{}", start, (start + len - 1) % n),
            _ => write!(f, "{}", self.sites),
        }
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region({self})")
    }
}

/// Cyclic distance between two sites on a ring of `n`.
pub fn ring_distance(n: usize, a: usize, b: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

/// All nonempty proper cyclic intervals, ordered by length, then start.
pub fn all_intervals(n: usize) -> Vec<Region> {
    let mut out = Vec::new();
    for len in 1..n {
        for start in 0..n {
            out.push(Region::interval(n, start, len));
        }
    }
    out
}
