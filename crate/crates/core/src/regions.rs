//! Correctability properties of boundary regions, entanglement wedges and
//! complementary recovery.
//!
//! For a choice `s` of logical bulk sites, the remaining bulk sites form the
//! junk subsystem. The dressed group is the stabilizer group together with
//! the logical pairs of all junk sites. A region `R` is
//!
//! * correctable if every logical Pauli on `s` can be cleaned off `R` using
//!   stabilizers alone,
//! * Pauli-dressed-cleanable if the same works with the dressed group,
//! * bare-trivial if every Pauli on `R` commuting with the dressed group acts
//!   as the identity on `s`,
//! * dressed-trivial if every Pauli on `R` commuting with the stabilizers acts
//!   as the identity on `s`.

use std::sync::OnceLock;

use crate::code::SubsystemCode;
use crate::error::{Error, Result};
use crate::par;
use crate::region::Region;
use crate::sites::SiteSet;
use crate::symplectic::{centralizer, supported_subbasis, MaskedEchelon, Pauli, PauliBasis};

/// Which logical generator failed a cleaning test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogicalGenerator {
    pub site: usize,
    /// `false` for `X̄`, `true` for `Z̄`.
    pub is_z: bool,
}

impl std::fmt::Display for LogicalGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", if self.is_z { "Z" } else { "X" }, self.site)
    }
}

/// A code together with a logical/junk split, with the groups every
/// property check needs built once.
pub struct Split<'a> {
    code: &'a SubsystemCode,
    logical: Vec<usize>,
    dressed: Vec<Pauli>,
    bare_centralizer: OnceLock<PauliBasis>,
    dressed_centralizer: OnceLock<PauliBasis>,
}

impl<'a> Split<'a> {
    pub fn new(code: &'a SubsystemCode, s: &[usize]) -> Result<Self> {
        let m = code.bulk_count();
        let mut logical: Vec<usize> = s.to_vec();
        logical.sort_unstable();
        logical.dedup();
        if let Some(&bad) = logical.iter().find(|&&i| i >= m) {
            return Err(Error::Input(format!("bulk site {bad} out of range for {m} sites")));
        }
        let mut dressed = code.stabilizers().rows().to_vec();
        for j in (0..m).filter(|j| logical.binary_search(j).is_err()) {
            dressed.push(code.logical_x(j).clone());
            dressed.push(code.logical_z(j).clone());
        }
        Ok(Split {
            code,
            logical,
            dressed,
            bare_centralizer: OnceLock::new(),
            dressed_centralizer: OnceLock::new(),
        })
    }

    pub fn code(&self) -> &SubsystemCode {
        self.code
    }

    pub fn logical(&self) -> &[usize] {
        &self.logical
    }

    fn generators(&self) -> impl Iterator<Item = (LogicalGenerator, &Pauli)> + '_ {
        self.logical.iter().flat_map(move |&i| {
            [
                (LogicalGenerator { site: i, is_z: false }, self.code.logical_x(i)),
                (LogicalGenerator { site: i, is_z: true }, self.code.logical_z(i)),
            ]
        })
    }

    /// First logical generator that cannot be cleaned off `r` with
    /// stabilizers (`dressed = false`) or the dressed group.
    pub fn uncleanable(&self, r: &SiteSet, dressed: bool) -> Option<LogicalGenerator> {
        let group = if dressed { &self.dressed[..] } else { self.code.stabilizers().rows() };
        let ech = MaskedEchelon::new(group, r);
        self.generators().find(|(_, p)| !ech.can_clean(p)).map(|(g, _)| g)
    }

    pub fn correctable(&self, r: &SiteSet) -> bool {
        self.uncleanable(r, false).is_none()
    }

    pub fn pauli_dressed_cleanable(&self, r: &SiteSet) -> bool {
        self.uncleanable(r, true).is_none()
    }

    pub fn bare_centralizer(&self) -> &PauliBasis {
        self.bare_centralizer.get_or_init(|| {
            centralizer(&crate::symplectic::canonicalize_n(self.code.n(), self.dressed.clone()))
        })
    }

    pub fn dressed_centralizer(&self) -> &PauliBasis {
        self.dressed_centralizer
            .get_or_init(|| centralizer(self.code.stabilizers()))
    }

    fn acts_trivially(&self, p: &Pauli) -> bool {
        self.generators().all(|(_, l)| !l.anticommutes_with(p))
    }

    /// A Pauli supported on `r` in `group` that acts nontrivially on `s`.
    fn nontrivial_in(&self, group: &PauliBasis, r: &SiteSet) -> Option<Pauli> {
        supported_subbasis(group, r)
            .rows()
            .iter()
            .find(|p| !self.acts_trivially(p))
            .cloned()
    }

    pub fn bare_trivial(&self, r: &SiteSet) -> bool {
        self.nontrivial_in(self.bare_centralizer(), r).is_none()
    }

    pub fn dressed_trivial(&self, r: &SiteSet) -> bool {
        self.nontrivial_in(self.dressed_centralizer(), r).is_none()
    }

    /// A dressed logical supported on `r` acting nontrivially on `s`.
    pub fn dressed_witness(&self, r: &SiteSet) -> Option<Pauli> {
        self.nontrivial_in(self.dressed_centralizer(), r)
    }
}

pub fn is_correctable(code: &SubsystemCode, r: &Region, s: &[usize]) -> Result<bool> {
    Ok(Split::new(code, s)?.correctable(r.sites()))
}

pub fn is_pauli_dressed_cleanable(code: &SubsystemCode, r: &Region, s: &[usize]) -> Result<bool> {
    Ok(Split::new(code, s)?.pauli_dressed_cleanable(r.sites()))
}

pub fn is_bare_trivial(code: &SubsystemCode, r: &Region, s: &[usize]) -> Result<bool> {
    Ok(Split::new(code, s)?.bare_trivial(r.sites()))
}

pub fn is_dressed_trivial(code: &SubsystemCode, r: &Region, s: &[usize]) -> Result<bool> {
    Ok(Split::new(code, s)?.dressed_trivial(r.sites()))
}

/// Bulk sites whose logical algebra can be reconstructed on `r`, i.e. for
/// which `r`'s complement is correctable.
pub fn entanglement_wedge(code: &SubsystemCode, r: &Region) -> Vec<usize> {
    let ech = MaskedEchelon::new(code.stabilizers().rows(), &r.sites().complement());
    (0..code.bulk_count())
        .filter(|&i| ech.can_clean(code.logical_x(i)) && ech.can_clean(code.logical_z(i)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeReport {
    pub region: Region,
    pub wedge: Vec<usize>,
    pub complement_wedge: Vec<usize>,
    pub residual: Vec<usize>,
    pub complementary: bool,
    /// Smallest boundary inflation of the region after which its wedge
    /// covers everything outside the complement's wedge.
    pub epsilon: Option<usize>,
}

pub fn complementary_recovery(code: &SubsystemCode, r: &Region) -> WedgeReport {
    let wedge = entanglement_wedge(code, r);
    let complement_wedge = entanglement_wedge(code, &r.complement());
    let m = code.bulk_count();
    let mut in_c = vec![false; m];
    for &i in &complement_wedge {
        in_c[i] = true;
    }
    let mut in_w = vec![false; m];
    for &i in &wedge {
        in_w[i] = true;
    }
    let residual: Vec<usize> = (0..m).filter(|&i| !in_w[i] && !in_c[i]).collect();
    let complementary = residual.is_empty();
    let epsilon = if complementary {
        Some(0)
    } else {
        let target: Vec<usize> = (0..m).filter(|&i| !in_c[i]).collect();
        let mut eps = 1;
        loop {
            let ball = r.ball(eps);
            let w = entanglement_wedge(code, &ball);
            if target.iter().all(|t| w.binary_search(t).is_ok()) {
                break Some(eps);
            }
            if ball.len() == code.n() {
                break None;
            }
            eps += 1;
        }
    };
    WedgeReport {
        region: r.clone(),
        wedge,
        complement_wedge,
        residual,
        complementary,
        epsilon,
    }
}

/// Reports for every nonempty proper cyclic interval, ordered by length
/// then start.
pub fn cr_scan_connected(code: &SubsystemCode) -> Vec<WedgeReport> {
    let regions = crate::region::all_intervals(code.n());
    par::map(&regions, |r| complementary_recovery(code, r))
}

/// Bulk sites within graph distance `delta` of `set`.
pub fn bulk_ball(dist: &[Vec<usize>], set: &[usize], delta: usize) -> Vec<usize> {
    (0..dist.len())
        .filter(|&v| set.iter().any(|&u| dist[u][v] <= delta))
        .collect()
}

/// Least `x` such that some connected `R_x ⊇ r` with `|R_x - r| ≤ x` has a
/// wedge containing the `delta`-neighbourhood of `r`'s wedge. `None` when
/// only the full boundary works.
pub fn kappa(code: &SubsystemCode, r: &Region, delta: usize) -> Result<Option<usize>> {
    kappa_within(code, r, delta, code.n())
}

/// [`kappa`] searching only extensions by at most `max_x` sites.
pub fn kappa_within(code: &SubsystemCode, r: &Region, delta: usize, max_x: usize) -> Result<Option<usize>> {
    let Some((start, len)) = r.as_interval() else {
        return Err(Error::Input(format!("kappa needs a connected region, got {r}")));
    };
    let dist = code
        .bulk_distances()
        .ok_or_else(|| Error::Unsupported("kappa needs the bulk graph of the code".into()))?;
    let n = code.n();
    let wedge = entanglement_wedge(code, r);
    let target = bulk_ball(&dist, &wedge, delta);
    let holds = |region: &Region| {
        let w = entanglement_wedge(code, region);
        target.iter().all(|t| w.binary_search(t).is_ok())
    };
    if len == 0 {
        // The empty region sits anywhere; grow intervals from every start.
        for x in (0..n).take_while(|&x| x <= max_x) {
            let found = par::find_first_index(n, |s| holds(&Region::interval(n, s, x)));
            if found.is_some() {
                return Ok(Some(x));
            }
        }
        return Ok(None);
    }
    for x in (0..n - len).take_while(|&x| x <= max_x) {
        let found = par::find_first_index(x + 1, |a| holds(&Region::interval(n, (start + n - a) % n, len + x)));
        if found.is_some() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
