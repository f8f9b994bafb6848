//! Pauli-group linear algebra over GF(2).
//!
//! A [`Pauli`] on `n` qubits is stored as `i^phase · ∏_j X_j^{x_j} Z_j^{z_j}`
//! with the X factor to the left of the Z factor on every site, so `Y = i·XZ`
//! carries one unit of phase. The `x` and `z` halves are packed into 64-bit
//! words, x-block first, which makes the symplectic column order (all X columns
//! before all Z columns) coincide with the word order.
//!
//! Commutation and cleaning look at the symplectic part only. Phases matter
//! for [`PauliBasis::member`], which is how `-I ∉ S` is checked.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sites::{words_for, SiteSet, WORD};

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pauli {
    n: usize,
    /// `[x words | z words]`
    bits: Vec<u64>,
    /// exponent of `i`, mod 4
    phase: u8,
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Pauli {
            n,
            bits: vec![0; 2 * words_for(n)],
            phase: 0,
        }
    }

    /// Hermitian single-site Pauli with `+` sign.
    pub fn single(n: usize, site: usize, letter: Letter) -> Self {
        let mut p = Pauli::identity(n);
        p.set_letter(site, letter);
        p.phase = p.y_count() as u8 % 4;
        p
    }

    /// Build from explicit bit vectors, choosing the phase so that the
    /// operator is the `+`-signed product of the corresponding letters.
    pub fn from_bits(x: &[bool], z: &[bool]) -> Self {
        assert_eq!(x.len(), z.len());
        let mut p = Pauli::identity(x.len());
        for i in 0..x.len() {
            p.set_bits(i, x[i], z[i]);
        }
        p.phase = (p.y_count() % 4) as u8;
        p
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = Pauli::identity(letters.len());
        for (i, &l) in letters.iter().enumerate() {
            p.set_letter(i, l);
        }
        p.phase = (p.y_count() % 4) as u8;
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase % 4;
    }

    /// Multiply the operator by `i^k`.
    pub fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) % 4;
    }

    #[inline]
    fn words(&self) -> usize {
        self.bits.len() / 2
    }

    /// Adjoint: same letters, phase `-p + 2·#Y`.
    pub fn dagger(&self) -> Pauli {
        let mut out = self.clone();
        out.phase = ((8 + 2 * (self.y_count() % 2) as i32 - self.phase as i32) % 4) as u8;
        out
    }

    #[inline]
    pub fn x(&self, i: usize) -> bool {
        (self.bits[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn z(&self, i: usize) -> bool {
        (self.bits[self.words() + i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn letter(&self, i: usize) -> Letter {
        Letter::from_bits(self.x(i), self.z(i))
    }

    /// Overwrite the bits on one site without touching the phase.
    #[inline]
    pub fn set_bits(&mut self, i: usize, x: bool, z: bool) {
        let w = self.words();
        let m = 1u64 << (i % WORD);
        if x {
            self.bits[i / WORD] |= m;
        } else {
            self.bits[i / WORD] &= !m;
        }
        if z {
            self.bits[w + i / WORD] |= m;
        } else {
            self.bits[w + i / WORD] &= !m;
        }
    }

    fn set_letter(&mut self, i: usize, l: Letter) {
        let (x, z) = l.bits();
        self.set_bits(i, x, z);
    }

    /// Number of sites carrying `Y`.
    pub fn y_count(&self) -> usize {
        let w = self.words();
        (0..w)
            .map(|k| (self.bits[k] & self.bits[w + k]).count_ones() as usize)
            .sum()
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize) % 2 == self.y_count() % 2
    }

    /// True when the symplectic part is zero (any phase).
    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn support(&self) -> SiteSet {
        let w = self.words();
        let mut s = SiteSet::empty(self.n);
        for k in 0..w {
            let mut word = self.bits[k] | self.bits[w + k];
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                s.insert(k * WORD + b);
            }
        }
        s
    }

    /// True when no site of `region` carries a non-identity letter.
    pub fn avoids(&self, region: &SiteSet) -> bool {
        let w = self.words();
        region
            .words()
            .iter()
            .enumerate()
            .all(|(k, &m)| (self.bits[k] | self.bits[w + k]) & m == 0)
    }

    pub fn supported_in(&self, region: &SiteSet) -> bool {
        let w = self.words();
        region
            .words()
            .iter()
            .enumerate()
            .all(|(k, &m)| (self.bits[k] | self.bits[w + k]) & !m == 0)
    }

    /// Symplectic bit `c` of the 2n-column layout (X columns first).
    #[inline]
    pub(crate) fn column(&self, c: usize) -> bool {
        if c < self.n {
            self.x(c)
        } else {
            self.z(c - self.n)
        }
    }

    /// `self ← self · other`, tracking the phase.
    pub fn mul_assign(&mut self, other: &Pauli) {
        assert_eq!(self.n, other.n, "Pauli length mismatch");
        let w = self.words();
        let mut cross = 0u32;
        for k in 0..w {
            cross += (self.bits[w + k] & other.bits[k]).count_ones();
        }
        self.phase = ((self.phase as u32 + other.phase as u32 + 2 * cross) % 4) as u8;
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    /// Whether the two supports overlap on an odd number of anticommuting sites.
    pub fn anticommutes_with(&self, other: &Pauli) -> bool {
        let w = self.words();
        let mut acc = 0u32;
        for k in 0..w {
            acc += (self.bits[k] & other.bits[w + k]).count_ones();
            acc += (self.bits[w + k] & other.bits[k]).count_ones();
        }
        acc % 2 == 1
    }

    /// Restrict to a set of sites: letters outside `region` become `I`.
    /// The phase is recomputed so the restriction is `+`-signed Hermitian.
    pub fn restricted_to(&self, region: &SiteSet) -> Pauli {
        let w = self.words();
        let mut out = self.clone();
        for (k, &m) in region.words().iter().enumerate() {
            out.bits[k] &= m;
            out.bits[w + k] &= m;
        }
        out.phase = (out.y_count() % 4) as u8;
        out
    }

    /// Re-index onto a register of `n_total` qubits, site `j` going to `map[j]`.
    pub fn embed(&self, n_total: usize, map: &[usize]) -> Pauli {
        assert_eq!(map.len(), self.n);
        let mut out = Pauli::identity(n_total);
        for (j, &t) in map.iter().enumerate() {
            out.set_bits(t, self.x(j), self.z(j));
        }
        out.phase = self.phase;
        out
    }

    /// Pick out the sites listed in `sites` (in that order); the phase is
    /// carried over unchanged.
    pub fn select(&self, sites: &[usize]) -> Pauli {
        let mut out = Pauli::identity(sites.len());
        for (j, &s) in sites.iter().enumerate() {
            out.set_bits(j, self.x(s), self.z(s));
        }
        out.phase = self.phase;
        out
    }
}

pub fn commutes(p: &Pauli, q: &Pauli) -> Result<bool> {
    if p.n != q.n {
        return Err(Error::LengthMismatch(p.n, q.n));
    }
    Ok(!p.anticommutes_with(q))
}

pub fn multiply(p: &Pauli, q: &Pauli) -> Result<Pauli> {
    if p.n != q.n {
        return Err(Error::LengthMismatch(p.n, q.n));
    }
    let mut out = p.clone();
    out.mul_assign(q);
    Ok(out)
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = (self.phase as usize + 4 - self.y_count() % 4) % 4;
        f.write_str(match sign {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        for i in 0..self.n {
            write!(f, "{}", self.letter(i).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for Pauli {
    type Err = Error;

    /// `[+|-|+i|-i|i]` followed by letters from `IXYZ`. The Unicode minus
    /// `−` is accepted as well.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, rest) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i").or_else(|| s.strip_prefix("−i")) {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-').or_else(|| s.strip_prefix('−')) {
            (2, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (1, r)
        } else {
            (0, s)
        };
        let prefix_len = s.len() - rest.len();
        let mut letters = Vec::with_capacity(rest.len());
        for (col, c) in rest.chars().enumerate() {
            letters.push(match c {
                'I' | '_' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                _ => {
                    return Err(Error::parse(
                        1,
                        prefix_len + col + 1,
                        format!("unexpected character {c:?} in Pauli string"),
                    ))
                }
            });
        }
        let mut p = Pauli::from_letters(&letters);
        p.add_phase(sign);
        Ok(p)
    }
}

/// Row-reduced echelon basis of a Pauli subgroup (phases ride along).
///
/// Pivots are the lowest symplectic column of each row with X columns before
/// Z columns; every pivot column is zero in all other rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PauliBasis {
    n: usize,
    rows: Vec<Pauli>,
    pivots: Vec<usize>,
}

/// Outcome of a successful [`PauliBasis::member`] query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    /// Indices of basis rows whose product (in increasing order) reproduces
    /// the symplectic part.
    pub combination: Vec<usize>,
    pub phase_match: bool,
    /// Phase of the reconstructed product.
    pub phase: u8,
}

impl PauliBasis {
    pub fn empty(n: usize) -> Self {
        PauliBasis {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Pauli] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Is the subgroup abelian?
    pub fn is_abelian(&self) -> bool {
        for (i, p) in self.rows.iter().enumerate() {
            for q in &self.rows[i + 1..] {
                if p.anticommutes_with(q) {
                    return false;
                }
            }
        }
        true
    }

    pub fn member(&self, p: &Pauli) -> Option<Membership> {
        assert_eq!(p.n, self.n, "Pauli length mismatch");
        let mut residual = p.clone();
        let mut combination = Vec::new();
        let mut product = Pauli::identity(self.n);
        for (r, (row, &c)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if residual.column(c) {
                residual.mul_assign(row);
                product.mul_assign(row);
                combination.push(r);
            }
        }
        if !residual.is_identity() {
            return None;
        }
        Some(Membership {
            combination,
            phase_match: product.phase == p.phase,
            phase: product.phase,
        })
    }

    pub fn contains(&self, p: &Pauli) -> bool {
        self.member(p).is_some()
    }

    /// Append generators and re-canonicalize.
    pub fn extended<'a, I: IntoIterator<Item = &'a Pauli>>(&self, more: I) -> PauliBasis {
        let mut gens = self.rows.clone();
        gens.extend(more.into_iter().cloned());
        canonicalize_n(self.n, gens)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pauli> {
        self.rows.iter()
    }

    /// Every element of the span, with phases from the ordered product.
    /// Exponential; intended for small groups and tests.
    pub fn span_elements(&self) -> Vec<Pauli> {
        assert!(self.rank() <= 24, "span too large to enumerate");
        let mut out = Vec::with_capacity(1 << self.rank());
        for mask in 0u64..(1u64 << self.rank()) {
            let mut p = Pauli::identity(self.n);
            for (i, row) in self.rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    p.mul_assign(row);
                }
            }
            out.push(p);
        }
        out
    }
}

/// Reduced row-echelon basis of the span of `gens`.
///
/// Panics if the generators disagree on `n`; an empty list yields rank 0 on
/// zero sites (use [`canonicalize_n`] to fix `n`).
pub fn canonicalize(gens: &[Pauli]) -> PauliBasis {
    let n = gens.first().map_or(0, |p| p.n);
    canonicalize_n(n, gens.to_vec())
}

pub fn canonicalize_n(n: usize, mut rows: Vec<Pauli>) -> PauliBasis {
    for r in &rows {
        assert_eq!(r.n, n, "Pauli length mismatch");
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    let words = words_for(n);
    for c in 0..2 * n {
        let (word, bit) = if c < n {
            (c / WORD, c % WORD)
        } else {
            (words + (c - n) / WORD, (c - n) % WORD)
        };
        let has = |p: &Pauli| (p.bits[word] >> bit) & 1 == 1;
        let Some(found) = (rank..rows.len()).find(|&r| has(&rows[r])) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && has(row) {
                row.mul_assign(&pivot_row);
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    PauliBasis { n, rows, pivots }
}

/// Echelon form of a generating set with respect to the columns selected by
/// a site mask, keeping the full operators.
///
/// This is the cleaning primitive: rows with a nonzero masked part are kept
/// in echelon order and can be used to clear a Pauli's masked component;
/// rows whose masked part vanished span the subgroup supported off the mask.
#[derive(Clone, Debug)]
pub struct MaskedEchelon {
    n: usize,
    mask: Vec<u64>,
    rows: Vec<Pauli>,
    pivots: Vec<(usize, u64)>,
    kernel: Vec<Pauli>,
}

impl MaskedEchelon {
    pub fn new(gens: &[Pauli], region: &SiteSet) -> Self {
        let n = region.n();
        let w = words_for(n);
        let mut mask = vec![0u64; 2 * w];
        mask[..w].copy_from_slice(region.words());
        mask[w..].copy_from_slice(region.words());

        let mut work: Vec<Pauli> = gens.to_vec();
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        // Scan masked columns in symplectic order.
        for k in 0..2 * w {
            let mut m = mask[k];
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                let bit = 1u64 << b;
                let Some(found) = work.iter().position(|p| p.bits[k] & bit != 0) else {
                    continue;
                };
                let pivot_row = work.swap_remove(found);
                for row in work.iter_mut() {
                    if row.bits[k] & bit != 0 {
                        row.mul_assign(&pivot_row);
                    }
                }
                rows.push(pivot_row);
                pivots.push((k, bit));
            }
        }
        // `work` now holds rows with zero masked part.
        let kernel = work.into_iter().filter(|p| !p.is_identity()).collect();
        MaskedEchelon {
            n,
            mask,
            rows,
            pivots,
            kernel,
        }
    }

    /// Rank of the group restricted to the mask.
    pub fn restricted_rank(&self) -> usize {
        self.rows.len()
    }

    /// Generators (not yet canonical) of elements with no support on the mask.
    pub fn kernel(&self) -> &[Pauli] {
        &self.kernel
    }

    /// Multiply `p` by group elements until its masked part is gone.
    pub fn clean(&self, p: &Pauli) -> Option<Pauli> {
        assert_eq!(p.n, self.n, "Pauli length mismatch");
        let mut q = p.clone();
        for (row, &(k, bit)) in self.rows.iter().zip(&self.pivots) {
            if q.bits[k] & bit != 0 {
                q.mul_assign(row);
            }
        }
        if q.bits.iter().zip(&self.mask).all(|(a, m)| a & m == 0) {
            Some(q)
        } else {
            None
        }
    }

    /// Masked columns holding a pivot, as `(site, is_z)`, in row order.
    pub fn pivot_columns(&self) -> Vec<(usize, bool)> {
        let w = words_for(self.n);
        self.pivots
            .iter()
            .map(|&(k, bit)| {
                let b = bit.trailing_zeros() as usize;
                if k < w {
                    (k * WORD + b, false)
                } else {
                    ((k - w) * WORD + b, true)
                }
            })
            .collect()
    }

    /// Echelon rows back-substituted so each pivot column is set in exactly
    /// one row.
    pub fn reduced_rows(&self) -> Vec<Pauli> {
        let mut rows = self.rows.clone();
        for i in (0..rows.len()).rev() {
            let (k, bit) = self.pivots[i];
            for j in 0..i {
                if rows[j].bits[k] & bit != 0 {
                    let r = rows[i].clone();
                    rows[j].mul_assign(&r);
                }
            }
        }
        rows
    }

    /// Only the yes/no answer of [`MaskedEchelon::clean`], without building
    /// the cleaned operator's phase.
    pub fn can_clean(&self, p: &Pauli) -> bool {
        let mut q: Vec<u64> = p.bits.iter().zip(&self.mask).map(|(a, m)| a & m).collect();
        for (row, &(k, bit)) in self.rows.iter().zip(&self.pivots) {
            if q[k] & bit != 0 {
                for (a, (b, m)) in q.iter_mut().zip(row.bits.iter().zip(&self.mask)) {
                    *a ^= b & m;
                }
            }
        }
        q.iter().all(|&a| a == 0)
    }
}

/// `p·g` for some `g` in the span of `group`, supported off `region`.
pub fn clean_onto(p: &Pauli, group: &PauliBasis, region: &SiteSet) -> Option<Pauli> {
    MaskedEchelon::new(group.rows(), region).clean(p)
}

/// Basis of all span elements supported inside `region`.
pub fn supported_subbasis(group: &PauliBasis, region: &SiteSet) -> PauliBasis {
    let outside = region.complement();
    let ech = MaskedEchelon::new(group.rows(), &outside);
    canonicalize_n(group.n(), ech.kernel().to_vec())
}

/// Basis of the symplectic complement: all Paulis commuting with every row.
/// Generators are `+`-signed Hermitian.
pub fn centralizer(group: &PauliBasis) -> PauliBasis {
    let n = group.n();
    // Null space of the matrix whose rows are (z | x) of each generator.
    let swapped: Vec<Vec<bool>> = group
        .rows()
        .iter()
        .map(|p| {
            let mut v = Vec::with_capacity(2 * n);
            v.extend((0..n).map(|i| p.z(i)));
            v.extend((0..n).map(|i| p.x(i)));
            v
        })
        .collect();
    let null = nullspace(&swapped, 2 * n);
    let gens: Vec<Pauli> = null
        .into_iter()
        .map(|v| Pauli::from_bits(&v[..n], &v[n..]))
        .collect();
    canonicalize_n(n, gens)
}

/// Null space of a dense GF(2) matrix, one basis vector per free column.
fn nullspace(rows: &[Vec<bool>], cols: usize) -> Vec<Vec<bool>> {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(found) = (r..m.len()).find(|&i| m[i][c]) else {
            continue;
        };
        m.swap(r, found);
        for i in 0..m.len() {
            if i != r && m[i][c] {
                let pr = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(pr) {
                    *a ^= b;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut out = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![false; cols];
        v[f] = true;
        for (row, &pc) in pivot_cols.iter().enumerate() {
            if m[row][f] {
                v[pc] = true;
            }
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    fn five_qubit_stabilizers() -> Vec<Pauli> {
        ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].iter().map(|s| p(s)).collect()
    }

    #[test]
    fn commutation_examples() {
        assert!(!commutes(&p("X"), &p("Z")).unwrap());
        assert!(commutes(&p("X"), &p("X")).unwrap());
        assert!(commutes(&p("XZZXI"), &p("IXZZX")).unwrap());
        assert_eq!(commutes(&p("XX"), &p("X")), Err(Error::LengthMismatch(2, 1)));
    }

    #[test]
    fn multiplication_table() {
        // X·Z = -iY
        let xz = multiply(&p("X"), &p("Z")).unwrap();
        assert_eq!(xz, p("-iY"));
        // Z·X = iY
        assert_eq!(multiply(&p("Z"), &p("X")).unwrap(), p("+iY"));
        for s in ["X", "Y", "Z", "-XYZ", "YYIZ"] {
            let q = p(s);
            let sq = multiply(&q, &q).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.phase(), 0, "{s} squared");
        }
        let prod = multiply(&p("XZZXI"), &p("IXZZX")).unwrap();
        assert_eq!(prod.to_string().trim_start_matches(['+', '-', 'i']), "XYIYX");
    }

    #[test]
    fn text_round_trip() {
        for s in ["XYZI", "-XYZ", "+iZZ", "-iY", "IIII"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("+XX").to_string(), "XX");
        assert_eq!(p("−Z").to_string(), "-Z");
        assert!(matches!("XQ".parse::<Pauli>(), Err(Error::Parse { column: 2, .. })));
    }

    #[test]
    fn hermiticity_follows_y_count() {
        assert!(p("Y").is_hermitian());
        assert!(p("-YY").is_hermitian());
        let mut q = p("Y");
        q.add_phase(1);
        assert!(!q.is_hermitian());
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(&[p("XI"), p("XI")]).rank(), 1);
        assert_eq!(canonicalize(&[]).rank(), 0);
        assert_eq!(canonicalize(&five_qubit_stabilizers()).rank(), 4);
    }

    #[test]
    fn five_qubit_generators_are_independent_by_enumeration() {
        let gens = five_qubit_stabilizers();
        for mask in 1u32..16 {
            let mut acc = Pauli::identity(5);
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc.mul_assign(g);
                }
            }
            assert!(!acc.is_identity());
        }
    }

    #[test]
    fn member_examples() {
        let basis = canonicalize(&five_qubit_stabilizers());
        let id = basis.member(&Pauli::identity(5)).unwrap();
        assert!(id.combination.is_empty());
        assert!(id.phase_match);
        let mut minus_id = Pauli::identity(5);
        minus_id.add_phase(2);
        assert!(!basis.member(&minus_id).unwrap().phase_match);
        let g = basis.member(&p("XZZXI")).unwrap();
        assert!(g.phase_match);
        assert!(!basis.member(&p("-XZZXI")).unwrap().phase_match);
        assert!(basis.member(&p("XXXXX")).is_none());
    }

    #[test]
    fn clean_onto_examples() {
        let basis = canonicalize(&five_qubit_stabilizers());
        let lx = p("XXXXX");
        let r01 = SiteSet::from_sites(5, [0, 1]);
        let cleaned = clean_onto(&lx, &basis, &r01).unwrap();
        assert!(cleaned.avoids(&r01));
        let ratio = multiply(&lx, &cleaned).unwrap();
        assert!(basis.contains(&ratio));

        let r012 = SiteSet::from_sites(5, [0, 1, 2]);
        assert!(clean_onto(&lx, &basis, &r012).is_none());

        let outside = p("IIIXX");
        assert_eq!(clean_onto(&outside, &basis, &r012), Some(outside.clone()));
    }

    #[test]
    fn supported_subbasis_examples() {
        let basis = canonicalize(&five_qubit_stabilizers());
        assert_eq!(supported_subbasis(&basis, &SiteSet::full(5)).rank(), 4);
        assert_eq!(supported_subbasis(&basis, &SiteSet::empty(5)).rank(), 0);
        let four = SiteSet::from_sites(5, [0, 1, 2, 3]);
        assert_eq!(supported_subbasis(&basis, &four).rank(), 2);
        let three = SiteSet::from_sites(5, [0, 1, 2]);
        assert_eq!(supported_subbasis(&basis, &three).rank(), 0);
    }

    #[test]
    fn centralizer_of_five_qubit_code() {
        let basis = canonicalize(&five_qubit_stabilizers());
        let c = centralizer(&basis);
        assert_eq!(c.rank(), 6);
        assert!(c.contains(&p("XXXXX")));
        assert!(c.contains(&p("ZZZZZ")));
        for g in basis.rows() {
            assert!(c.contains(g));
        }
    }

    #[test]
    fn wide_registers_cross_word_boundaries() {
        let n = 130;
        let mut a = Pauli::single(n, 64, Letter::X);
        a.mul_assign(&Pauli::single(n, 129, Letter::Z));
        let b = Pauli::single(n, 129, Letter::X);
        assert!(a.anticommutes_with(&b));
        assert_eq!(a.support().iter().collect::<Vec<_>>(), vec![64, 129]);
        let basis = canonicalize(&[a.clone(), b.clone()]);
        assert_eq!(basis.rank(), 2);
        assert!(basis.contains(&multiply(&a, &b).unwrap()));
    }
}
