//! Distances, prices and tripartition searches.
//!
//! Subset scans are exact up to an explicit cutoff on the region size; past
//! it they report [`Scan::Exceeded`] instead of guessing. Among minimal
//! witnesses the lexicographically first one in boundary order is returned.

use crate::code::SubsystemCode;
use crate::error::Result;
use crate::par;
use crate::region::Region;
use crate::regions::Split;
use crate::sites::SiteSet;

pub const DEFAULT_CUTOFF: usize = 14;

/// Result of a bounded exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scan {
    Found { value: usize, witness: Region },
    Exceeded { cutoff: usize },
}

impl Scan {
    pub fn value(&self) -> Option<usize> {
        match self {
            Scan::Found { value, .. } => Some(*value),
            Scan::Exceeded { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Region> {
        match self {
            Scan::Found { witness, .. } => Some(witness),
            Scan::Exceeded { .. } => None,
        }
    }
}

/// Lexicographic `k`-subsets of `0..n`, produced in blocks.
struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            cur: (k <= n).then(|| (0..k).collect()),
        }
    }

    fn next_block(&mut self, max: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        while out.len() < max {
            let Some(cur) = self.cur.as_mut() else { break };
            out.push(cur.clone());
            let k = cur.len();
            let mut i = k;
            while i > 0 && cur[i - 1] == self.n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                self.cur = None;
            } else {
                cur[i - 1] += 1;
                for j in i..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
        }
        out
    }
}

const BLOCK: usize = 1 << 14;

/// First region of the smallest size in `lo..=hi` satisfying `pred`.
fn first_subset(n: usize, lo: usize, hi: usize, pred: impl Fn(&SiteSet) -> bool + Sync + Send) -> Option<Region> {
    for size in lo..=hi.min(n) {
        let mut combos = Combinations::new(n, size);
        loop {
            let block = combos.next_block(BLOCK);
            if block.is_empty() {
                break;
            }
            let hit = par::position_first(&block, |c| pred(&SiteSet::from_sites(n, c.iter().copied())));
            if let Some(i) = hit {
                return Some(Region::from_sites(n, block[i].iter().copied()));
            }
        }
    }
    None
}

/// First interval (by length, then start) with `lo <= len <= hi`.
fn first_interval(n: usize, lo: usize, hi: usize, pred: impl Fn(&Region) -> bool + Sync + Send) -> Option<Region> {
    for len in lo..=hi.min(n) {
        let starts = if len == 0 || len == n { 1 } else { n };
        if let Some(s) = par::find_first_index(starts, |s| pred(&Region::interval(n, s, len))) {
            return Some(Region::interval(n, s, len));
        }
    }
    None
}

/// Size of the smallest non-correctable region.
pub fn distance(code: &SubsystemCode, s: &[usize], cutoff: usize) -> Result<Scan> {
    let split = Split::new(code, s)?;
    Ok(match first_subset(code.n(), 1, cutoff, |r| !split.correctable(r)) {
        Some(w) => Scan::Found { value: w.len(), witness: w },
        None => Scan::Exceeded { cutoff },
    })
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

/// [`distance`] that stops before a size whose subsets would push the total
/// past `budget`; the reported cutoff is the last size scanned in full.
pub fn distance_budgeted(code: &SubsystemCode, s: &[usize], cutoff: usize, budget: u64) -> Result<Scan> {
    let n = code.n();
    let mut spent = 0u64;
    let mut reach = 0;
    for w in 1..=cutoff.min(n) {
        let c = binomial(n, w);
        if spent.saturating_add(c) > budget {
            break;
        }
        spent += c;
        reach = w;
    }
    match distance(code, s, reach)? {
        Scan::Exceeded { .. } if reach < cutoff.min(n) => Ok(Scan::Exceeded { cutoff: reach }),
        other => Ok(other),
    }
}

/// Size of the smallest region that is not Pauli-dressed-cleanable.
pub fn dressed_distance(code: &SubsystemCode, s: &[usize], cutoff: usize) -> Result<Scan> {
    let split = Split::new(code, s)?;
    Ok(match first_subset(code.n(), 1, cutoff, |r| !split.pauli_dressed_cleanable(r)) {
        Some(w) => Scan::Found { value: w.len(), witness: w },
        None => Scan::Exceeded { cutoff },
    })
}

/// Smallest non-correctable cyclic interval; `None` when every interval,
/// including the whole boundary, is correctable (empty `s`).
pub fn connected_distance(code: &SubsystemCode, s: &[usize]) -> Result<Option<(usize, Region)>> {
    let split = Split::new(code, s)?;
    Ok(first_interval(code.n(), 1, code.n(), |r| !split.correctable(r.sites())).map(|r| (r.len(), r)))
}

/// Minimum region size from which all logicals on `s` can be reconstructed.
pub fn price(code: &SubsystemCode, s: &[usize], cutoff: usize) -> Result<Scan> {
    let split = Split::new(code, s)?;
    Ok(match first_subset(code.n(), 0, cutoff, |r| split.correctable(&r.complement())) {
        Some(w) => Scan::Found { value: w.len(), witness: w },
        None => Scan::Exceeded { cutoff },
    })
}

pub fn connected_price(code: &SubsystemCode, s: &[usize]) -> Result<(usize, Region)> {
    let split = Split::new(code, s)?;
    let r = first_interval(code.n(), 0, code.n(), |r| split.correctable(&r.sites().complement()))
        .expect("the complement of the whole boundary is empty and always correctable");
    Ok((r.len(), r))
}

/// A notion of region size.
pub struct SizeFunction {
    pub name: String,
    #[allow(clippy::type_complexity)]
    eval: Box<dyn Fn(&Region) -> f64 + Send + Sync>,
}

impl SizeFunction {
    pub fn new(name: &str, eval: impl Fn(&Region) -> f64 + Send + Sync + 'static) -> Self {
        SizeFunction {
            name: name.into(),
            eval: Box::new(eval),
        }
    }

    pub fn eval(&self, r: &Region) -> f64 {
        (self.eval)(r)
    }

    pub fn cardinality() -> Self {
        SizeFunction::new("cardinality", |r| r.len() as f64)
    }

    /// Cardinality on connected regions, infinite otherwise.
    pub fn connected_cardinality() -> Self {
        SizeFunction::new("connected", |r| if r.connected() { r.len() as f64 } else { f64::INFINITY })
    }

    /// Length of the shortest cyclic interval containing the region.
    pub fn diameter() -> Self {
        SizeFunction::new("diameter", |r| diameter(r) as f64)
    }
}

pub fn diameter(r: &Region) -> usize {
    let n = r.n();
    let sites: Vec<usize> = r.iter().collect();
    if sites.is_empty() {
        return 0;
    }
    // Complement of the largest cyclic gap between consecutive sites.
    let mut max_gap = 0;
    for (i, &a) in sites.iter().enumerate() {
        let b = sites[(i + 1) % sites.len()];
        let gap = (b + n - a) % n;
        let gap = if gap == 0 { n } else { gap };
        max_gap = max_gap.max(gap - 1);
    }
    n - max_gap
}

/// `σ` of the first non-correctable candidate. Candidates must come in
/// non-decreasing `σ`; `None` when they run out.
pub fn sigma_distance<I>(code: &SubsystemCode, s: &[usize], sigma: &SizeFunction, candidates: I) -> Result<Option<(f64, Region)>>
where
    I: IntoIterator<Item = Region>,
{
    let split = Split::new(code, s)?;
    let mut last = f64::NEG_INFINITY;
    for r in candidates {
        let v = sigma.eval(&r);
        debug_assert!(v >= last, "candidates must be ordered by size");
        last = v;
        if !split.correctable(r.sites()) {
            return Ok(Some((v, r)));
        }
    }
    Ok(None)
}

/// All nonempty regions on `n` sites, sorted by `σ` then by site list.
pub fn regions_by_size(n: usize, sigma: &SizeFunction) -> Vec<Region> {
    assert!(n <= 20, "exhaustive region lists are for small boundaries");
    let mut all: Vec<(f64, Vec<usize>, Region)> = (1u32..1 << n)
        .map(|mask| {
            let sites: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let r = Region::from_sites(n, sites.iter().copied());
            (sigma.eval(&r), sites, r)
        })
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    all.into_iter().map(|(_, _, r)| r).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricReport {
    pub s: Vec<usize>,
    pub d: Scan,
    pub d_c: Option<usize>,
    pub p: Scan,
    pub p_c: usize,
    /// `2 <= p <= 2d - 2`; `None` if either scan exceeded its cutoff.
    pub window_ok: Option<bool>,
    /// `2 <= p_c <= 2 d_c - 2`.
    pub window_ok_connected: Option<bool>,
    pub non_correctable_witness: Option<Region>,
    pub connected_non_correctable_witness: Option<Region>,
    pub reconstruction_witness: Option<Region>,
    pub connected_reconstruction_witness: Region,
}

fn window(p: usize, d: usize) -> bool {
    2 <= p && p + 2 <= 2 * d
}

pub fn check_window(code: &SubsystemCode, s: &[usize], cutoff: usize) -> Result<MetricReport> {
    let d = distance(code, s, cutoff)?;
    let dc = connected_distance(code, s)?;
    let p = price(code, s, cutoff)?;
    let (p_c, pc_w) = connected_price(code, s)?;
    let window_ok = match (d.value(), p.value()) {
        (Some(d), Some(p)) => Some(window(p, d)),
        _ => None,
    };
    let window_ok_connected = dc.as_ref().map(|(d, _)| window(p_c, *d));
    Ok(MetricReport {
        s: s.to_vec(),
        non_correctable_witness: d.witness().cloned(),
        connected_non_correctable_witness: dc.as_ref().map(|(_, w)| w.clone()),
        reconstruction_witness: p.witness().cloned(),
        connected_reconstruction_witness: pc_w,
        d,
        d_c: dc.map(|(v, _)| v),
        p,
        p_c,
        window_ok,
        window_ok_connected,
    })
}

/// `(R0, R1, R2)` with `R0` correctable, `B(R1, 2 s_u)` and `B(R2, s_u)`
/// Pauli-dressed-cleanable.
pub type Tripartition = [Region; 3];

fn tripartition_ok(split: &Split, parts: &Tripartition, s_u: usize) -> bool {
    split.correctable(parts[0].sites())
        && split.pauli_dressed_cleanable(parts[1].ball(2 * s_u).sites())
        && split.pauli_dressed_cleanable(parts[2].ball(s_u).sites())
}

/// Split the witness `r` (a reconstruction region) into two pieces and
/// try both inflation assignments, most balanced split first.
fn split_witness(split: &Split, r: &Region, s_u: usize) -> Option<Tripartition> {
    let n = r.n();
    let r0 = r.complement();
    let sites: Vec<usize> = match r.as_interval() {
        Some((start, len)) => (0..len).map(|k| (start + k) % n).collect(),
        None => r.iter().collect(),
    };
    let len = sites.len();
    if len < 2 {
        return None;
    }
    let mut cuts: Vec<usize> = (1..len).collect();
    cuts.sort_by_key(|&c| ((2 * c).abs_diff(len), c));
    for c in cuts {
        let a = Region::from_sites(n, sites[..c].iter().copied());
        let b = Region::from_sites(n, sites[c..].iter().copied());
        for parts in [[r0.clone(), a.clone(), b.clone()], [r0.clone(), b.clone(), a.clone()]] {
            if tripartition_ok(split, &parts, s_u) {
                return Some(parts);
            }
        }
    }
    None
}

pub fn find_tripartition(code: &SubsystemCode, s: &[usize], s_u: usize) -> Result<Option<Tripartition>> {
    let split = Split::new(code, s)?;
    let n = code.n();
    // Constructive: split a minimal reconstruction region.
    let (_, conn_w) = connected_price(code, s)?;
    if let Some(t) = split_witness(&split, &conn_w, s_u) {
        return Ok(Some(t));
    }
    if n <= 20 {
        if let Some(w) = price(code, s, n)?.witness() {
            if let Some(t) = split_witness(&split, w, s_u) {
                return Ok(Some(t));
            }
        }
    }
    // Exhaustive over three cut points.
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples.push((a, b, c));
            }
        }
    }
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let build = |&(a, b, c): &(usize, usize, usize), perm: [usize; 3]| -> Tripartition {
        let pieces = [
            Region::interval(n, a, b - a),
            Region::interval(n, b, c - b),
            Region::interval(n, c, n - c + a),
        ];
        [pieces[perm[0]].clone(), pieces[perm[1]].clone(), pieces[perm[2]].clone()]
    };
    let hit = par::position_first(&triples, |t| PERMS.iter().any(|&p| tripartition_ok(&split, &build(t, p), s_u)));
    Ok(hit.map(|i| {
        let t = &triples[i];
        let p = PERMS.iter().find(|&&p| tripartition_ok(&split, &build(t, p), s_u)).unwrap();
        build(t, *p)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_qubit_metrics() {
        let code = SubsystemCode::five_qubit();
        let rep = check_window(&code, &[0], DEFAULT_CUTOFF).unwrap();
        assert_eq!(rep.d.value(), Some(3));
        assert_eq!(rep.d_c, Some(3));
        assert_eq!(rep.p.value(), Some(3));
        assert_eq!(rep.p_c, 3);
        assert_eq!(rep.window_ok, Some(true));
        assert_eq!(rep.non_correctable_witness, Some(Region::from_sites(5, [0, 1, 2])));
    }

    #[test]
    fn empty_logical_set() {
        let code = SubsystemCode::five_qubit();
        assert_eq!(distance(&code, &[], 5).unwrap(), Scan::Exceeded { cutoff: 5 });
        assert_eq!(price(&code, &[], 5).unwrap().value(), Some(0));
        assert_eq!(connected_distance(&code, &[]).unwrap(), None);
    }

    #[test]
    fn diameter_of_regions() {
        assert_eq!(diameter(&Region::from_sites(10, [1, 2, 3])), 3);
        assert_eq!(diameter(&Region::from_sites(10, [9, 0, 1])), 3);
        assert_eq!(diameter(&Region::from_sites(10, [0, 5])), 6);
        assert_eq!(diameter(&Region::from_sites(10, [4])), 1);
    }

    #[test]
    fn sigma_specializations() {
        let code = SubsystemCode::five_qubit();
        let card = SizeFunction::cardinality();
        let (v, _) = sigma_distance(&code, &[0], &card, regions_by_size(5, &card)).unwrap().unwrap();
        assert_eq!(v, 3.0);
        let diam = SizeFunction::diameter();
        let (v, _) = sigma_distance(&code, &[0], &diam, regions_by_size(5, &diam)).unwrap().unwrap();
        assert_eq!(v, 3.0);
    }

    #[test]
    fn five_qubit_tripartition() {
        let code = SubsystemCode::five_qubit();
        let t = find_tripartition(&code, &[0], 0).unwrap().unwrap();
        let total: usize = t.iter().map(Region::len).sum();
        assert_eq!(total, 5);
        assert!(t.iter().all(|r| r.len() <= 2));
        assert!(find_tripartition(&code, &[0], 1).unwrap().is_none());
    }
}
