//! Stabilizer tensors, perfectness checks, and contraction of a network of
//! identical tensors into a [`SubsystemCode`].
//!
//! A tensor with `2N` legs is stored as a stabilizer state on its legs. Leg 0
//! is the bulk leg; legs `1..2N` are the planar legs, matched in order with a
//! tiling vertex's slots.
//!
//! Contraction keeps one global stabilizer state on every leg of every
//! tensor and projects each wired leg pair onto `+XX` and `+ZZ` in turn.
//! Once all pairs are projected, the internal legs factor out as Bell pairs
//! and are stripped; what remains is a stabilizer state on boundary and bulk
//! legs, i.e. the Choi state of the encoding map.

use crate::code::{tiling_adjacency, Geometry, SubsystemCode};
use crate::dense::{self, C64};
use crate::error::{Error, Result};
use crate::sites::SiteSet;
use crate::symplectic::{canonicalize_n, Letter, MaskedEchelon, Pauli};
use crate::tiling::{Slot, Tiling};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTensor {
    name: String,
    legs: usize,
    state: Vec<Pauli>,
    code: SubsystemCode,
}

impl StabilizerTensor {
    /// Build from `legs` independent commuting generators on `legs` qubits;
    /// leg 0 is the bulk leg.
    pub fn from_state(name: &str, state: Vec<Pauli>) -> Result<Self> {
        let legs = state.first().map_or(0, Pauli::n);
        if legs < 2 || state.len() != legs {
            return Err(Error::Input(format!(
                "a tensor on {legs} legs needs {legs} state generators, got {}",
                state.len()
            )));
        }
        let basis = canonicalize_n(legs, state.clone());
        if basis.rank() != legs || !basis.is_abelian() || state.iter().any(|g| !g.is_hermitian()) {
            return Err(Error::Input("tensor generators must be independent commuting Hermitian Paulis".into()));
        }
        let code = lower_bulk_leg(basis.rows(), legs)?;
        Ok(StabilizerTensor {
            name: name.into(),
            legs,
            state,
            code,
        })
    }

    /// Build from a `[[2N-1, 1]]` code: the state is generated by `S ⊗ I`,
    /// `X̄ ⊗ X` and `Z̄ ⊗ Z` with the bulk leg first.
    pub fn from_code(name: &str, code: &SubsystemCode) -> Result<Self> {
        if code.bulk_count() != 1 || !code.is_exact() {
            return Err(Error::Input(
                "a tensor needs a code with exactly one bulk site and rank(S) = n - 1".into(),
            ));
        }
        let n = code.n();
        let map: Vec<usize> = (1..=n).collect();
        let mut state: Vec<Pauli> = code.stabilizers().rows().iter().map(|s| s.embed(n + 1, &map)).collect();
        let mut lx = code.logical_x(0).embed(n + 1, &map);
        lx.mul_assign(&Pauli::single(n + 1, 0, Letter::X));
        let mut lz = code.logical_z(0).embed(n + 1, &map);
        lz.mul_assign(&Pauli::single(n + 1, 0, Letter::Z));
        state.push(lx);
        state.push(lz);
        StabilizerTensor::from_state(name, state)
    }

    /// The six-leg tensor of the `[[5,1,3]]` code.
    pub fn five_qubit() -> Self {
        StabilizerTensor::from_code("five-qubit", &SubsystemCode::five_qubit()).unwrap()
    }

    /// An eight-leg graph-state tensor for seven-fold vertices. Every cyclic
    /// window of four planar legs is maximally entangled with the other four
    /// legs, which is all the `{3,7}` pushing rules use. (No eight-qubit
    /// perfect tensor exists.)
    pub fn window8() -> Self {
        const EDGES: [(usize, usize); 16] = [
            (0, 1),
            (0, 4),
            (0, 5),
            (0, 6),
            (0, 7),
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (1, 7),
            (2, 4),
            (2, 5),
            (3, 4),
            (3, 6),
            (5, 6),
            (5, 7),
        ];
        StabilizerTensor::from_state("window8", graph_state(8, &EDGES)).unwrap()
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "five-qubit" | "five_qubit" | "513" => Some(Self::five_qubit()),
            "window8" => Some(Self::window8()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn planar_legs(&self) -> usize {
        self.legs - 1
    }

    pub fn state(&self) -> &[Pauli] {
        &self.state
    }

    /// The code obtained by treating the bulk leg as input.
    pub fn code(&self) -> &SubsystemCode {
        &self.code
    }

    pub fn logical_pair(&self) -> (&Pauli, &Pauli) {
        (self.code.logical_x(0), self.code.logical_z(0))
    }

    pub fn dense(&self) -> Vec<C64> {
        dense::stabilizer_state(&self.state)
    }
}

/// Generators `X_v ∏_{u ~ v} Z_u` of a graph state.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Vec<Pauli> {
    (0..n)
        .map(|v| {
            let mut p = Pauli::single(n, v, Letter::X);
            for &(a, b) in edges {
                if a == v {
                    p.mul_assign(&Pauli::single(n, b, Letter::Z));
                } else if b == v {
                    p.mul_assign(&Pauli::single(n, a, Letter::Z));
                }
            }
            p
        })
        .collect()
}

/// Read off a code from a stabilizer state whose last `m` qubits are bulk.
///
/// Fails with [`Error::NotIsometric`] when the bulk qubits are not maximally
/// entangled with the rest.
fn split_choi_state(rows: &[Pauli], n: usize, m: usize) -> Result<(Vec<Pauli>, Vec<(Pauli, Pauli)>)> {
    let total = n + m;
    let bulk = SiteSet::from_sites(total, n..total);
    let ech = MaskedEchelon::new(rows, &bulk);
    if ech.restricted_rank() != 2 * m {
        return Err(Error::NotIsometric(format!(
            "bulk legs carry rank {} of the required {}",
            ech.restricted_rank(),
            2 * m
        )));
    }
    let boundary: Vec<usize> = (0..n).collect();
    let mut lx = vec![None; m];
    let mut lz = vec![None; m];
    for ((site, is_z), row) in ech.pivot_columns().into_iter().zip(ech.reduced_rows()) {
        let op = row.select(&boundary);
        if is_z {
            lz[site - n] = Some(op);
        } else {
            lx[site - n] = Some(op);
        }
    }
    let stabs = ech.kernel().iter().map(|p| p.select(&boundary)).collect();
    let logicals = lx
        .into_iter()
        .zip(lz)
        .map(|(x, z)| (x.expect("full bulk rank"), z.expect("full bulk rank")))
        .collect();
    Ok((stabs, logicals))
}

fn lower_bulk_leg(rows: &[Pauli], legs: usize) -> Result<SubsystemCode> {
    // Move the bulk leg to the end to reuse the Choi-state splitter.
    let map: Vec<usize> = std::iter::once(legs - 1).chain(0..legs - 1).collect();
    let moved: Vec<Pauli> = rows.iter().map(|p| p.embed(legs, &map)).collect();
    let (stabs, logicals) = split_choi_state(&moved, legs - 1, 1)?;
    SubsystemCode::new(legs - 1, stabs, logicals)
}

/// Outcome of a dense perfectness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectReport {
    pub legs: usize,
    /// Leg subsets whose matrix to the remaining legs is not a scaled
    /// isometry, in the order tested.
    pub failing: Vec<Vec<usize>>,
}

impl PerfectReport {
    pub fn pass(&self) -> bool {
        self.failing.is_empty()
    }
}

const PERFECT_TOL: f64 = 1e-9;

fn legs_of(amps: &[C64]) -> Result<usize> {
    if amps.is_empty() || !amps.len().is_power_of_two() {
        return Err(Error::Input(format!(
            "tensor has {} entries, not a power of two",
            amps.len()
        )));
    }
    Ok(amps.len().trailing_zeros() as usize)
}

/// Every leg subset of size at most half the legs maps isometrically onto
/// the rest.
pub fn check_perfect(amps: &[C64]) -> Result<PerfectReport> {
    let legs = legs_of(amps)?;
    let mut failing = Vec::new();
    for size in 1..=legs / 2 {
        for subset in combinations(legs, size) {
            let m = dense::bipartition_matrix(amps, legs, &subset);
            if !dense::is_scaled_coisometry(&m, PERFECT_TOL) {
                failing.push(subset);
            }
        }
    }
    Ok(PerfectReport { legs, failing })
}

/// Only cyclically consecutive windows of legs `0..L` are tested.
pub fn check_block_perfect(amps: &[C64]) -> Result<PerfectReport> {
    let legs = legs_of(amps)?;
    let cycle: Vec<usize> = (0..legs).collect();
    check_windows(amps, &cycle, legs / 2)
}

/// Windows of up to `max` consecutive entries of the cyclic leg order `cycle`.
pub fn check_windows(amps: &[C64], cycle: &[usize], max: usize) -> Result<PerfectReport> {
    let legs = legs_of(amps)?;
    let mut failing = Vec::new();
    let c = cycle.len();
    for size in 1..=max.min(c) {
        let starts = if size == c { 1 } else { c };
        for s in 0..starts {
            let w: Vec<usize> = (0..size).map(|t| cycle[(s + t) % c]).collect();
            let m = dense::bipartition_matrix(amps, legs, &w);
            if !dense::is_scaled_coisometry(&m, PERFECT_TOL) {
                failing.push(w);
            }
        }
    }
    Ok(PerfectReport { legs, failing })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Contract one copy of `tensor` per vertex of `slots`.
///
/// `slots[v][s]` says where planar leg `s + 1` of vertex `v` goes. Wired
/// pairs are projected in decreasing `priority` of their endpoints (ties by
/// vertex id), so outer layers are eliminated first when `priority` is the
/// layer index. Bulk site `v` is vertex `v`; boundary qubits follow the
/// `Slot::Boundary` indices.
pub fn contract_graph(slots: &[Vec<Slot>], tensor: &StabilizerTensor, priority: &[usize]) -> Result<SubsystemCode> {
    let legs = tensor.legs();
    let verts = slots.len();
    assert_eq!(priority.len(), verts);
    let mut boundary_pos = Vec::new();
    let mut pairs = Vec::new();
    for (v, vs) in slots.iter().enumerate() {
        if vs.len() != tensor.planar_legs() {
            return Err(Error::LegMismatch {
                planar: tensor.planar_legs(),
                degree: vs.len(),
            });
        }
        for (s, slot) in vs.iter().enumerate() {
            match *slot {
                Slot::Boundary(i) => boundary_pos.push((i, v * legs + s + 1)),
                Slot::Edge { to, slot: s2 } => {
                    match slots.get(to).and_then(|t| t.get(s2)) {
                        Some(Slot::Edge { to: back, slot: bs }) if *back == v && *bs == s => {}
                        _ => return Err(Error::Input(format!("slot {s} of vertex {v} is not wired symmetrically"))),
                    }
                    if (v, s) < (to, s2) {
                        let p = priority[v].max(priority[to]);
                        pairs.push((p, v, s, v * legs + s + 1, to * legs + s2 + 1));
                    }
                }
            }
        }
    }
    boundary_pos.sort_unstable();
    if boundary_pos.iter().enumerate().any(|(i, &(b, _))| b != i) {
        return Err(Error::Input("boundary indices must be 0..n without gaps".into()));
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let total = verts * legs;
    let mut rows: Vec<Pauli> = Vec::with_capacity(total);
    for v in 0..verts {
        let map: Vec<usize> = (0..legs).map(|l| v * legs + l).collect();
        rows.extend(tensor.state().iter().map(|g| g.embed(total, &map)));
    }

    let bell = |a: usize, b: usize, l: Letter| {
        let mut p = Pauli::single(total, a, l);
        p.mul_assign(&Pauli::single(total, b, l));
        p
    };
    for &(_, _, _, a, b) in &pairs {
        for l in [Letter::X, Letter::Z] {
            project(&mut rows, &bell(a, b, l))?;
        }
    }

    // Strip the Bell pairs from every generator.
    for &(_, _, _, a, b) in &pairs {
        let xx = bell(a, b, Letter::X);
        let zz = bell(a, b, Letter::Z);
        for r in rows.iter_mut() {
            if r.x(a) {
                r.mul_assign(&xx);
            }
            if r.z(a) {
                r.mul_assign(&zz);
            }
            debug_assert!(!r.x(b) && !r.z(b));
        }
    }

    let n = boundary_pos.len();
    let external: Vec<usize> = boundary_pos
        .iter()
        .map(|&(_, q)| q)
        .chain((0..verts).map(|v| v * legs))
        .collect();
    let mut reduced = Vec::new();
    for r in &rows {
        if r.is_identity() {
            if r.phase() != 0 {
                return Err(Error::NotIsometric("contraction produced a scalar generator".into()));
            }
            continue;
        }
        reduced.push(r.select(&external));
    }
    let basis = canonicalize_n(n + verts, reduced);
    if basis.rank() != n + verts {
        return Err(Error::NotIsometric(format!(
            "contracted state has rank {} on {} external legs",
            basis.rank(),
            n + verts
        )));
    }
    let (stabs, logicals) = split_choi_state(basis.rows(), n, verts)?;
    SubsystemCode::new(n, stabs, logicals)
}

/// Replace the stabilizer state by its projection onto the `+1` eigenspace
/// of `p`.
fn project(rows: &mut [Pauli], p: &Pauli) -> Result<()> {
    let anti: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].anticommutes_with(p)).collect();
    if let Some((&first, rest)) = anti.split_first() {
        let pivot = rows[first].clone();
        for &i in rest {
            rows[i].mul_assign(&pivot);
        }
        rows[first] = p.clone();
        return Ok(());
    }
    let basis = canonicalize_n(p.n(), rows.to_vec());
    match basis.member(p) {
        Some(m) if m.phase_match => Ok(()),
        Some(_) => Err(Error::NotIsometric(
            "a Bell projection annihilates the network state".into(),
        )),
        None => Err(Error::NotIsometric("network state is not a full-rank stabilizer state".into())),
    }
}

/// Contract one tensor per tiling vertex.
pub fn contract(t: &Tiling, tensor: &StabilizerTensor) -> Result<SubsystemCode> {
    if tensor.planar_legs() != t.schlafli.k {
        return Err(Error::LegMismatch {
            planar: tensor.planar_legs(),
            degree: t.schlafli.k,
        });
    }
    let slots: Vec<Vec<Slot>> = t.vertices.iter().map(|v| v.slots.clone()).collect();
    let priority: Vec<usize> = t.vertices.iter().map(|v| v.layer).collect();
    let mut code = contract_graph(&slots, tensor, &priority)?;
    code.boundary_labels = t.boundary.iter().map(|&(v, s)| format!("{}:{}", v, s + 1)).collect();
    code.geometry = Some(Geometry {
        schlafli: t.schlafli,
        layers: t.layers,
    });
    Ok(code.with_bulk_graph(tiling_adjacency(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::Schlafli;

    #[test]
    fn five_qubit_tensor_round_trips_to_its_code() {
        let t = StabilizerTensor::five_qubit();
        assert_eq!(t.legs(), 6);
        let c = t.code();
        assert_eq!(c.stabilizers(), SubsystemCode::five_qubit().stabilizers());
        let (x, z) = t.logical_pair();
        assert!(x.anticommutes_with(z));
    }

    #[test]
    fn bell_and_ghz_perfectness() {
        let bell = StabilizerTensor::from_state("bell", vec!["XX".parse().unwrap(), "ZZ".parse().unwrap()]).unwrap();
        assert!(check_perfect(&bell.dense()).unwrap().pass());
        let ghz: Vec<Pauli> = ["XXXX", "ZZII", "IZZI", "IIZZ"].iter().map(|s| s.parse().unwrap()).collect();
        let psi = dense::stabilizer_state(&ghz);
        let report = check_perfect(&psi).unwrap();
        assert!(!report.pass());
        assert!(report.failing.contains(&vec![0, 1]));
        assert!(check_perfect(&[C64::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn window8_windows() {
        let t = StabilizerTensor::window8();
        let cycle: Vec<usize> = (1..8).collect();
        assert!(check_windows(&t.dense(), &cycle, 4).unwrap().pass());
        assert!(!check_perfect(&t.dense()).unwrap().pass());
    }

    #[test]
    fn single_vertex_is_the_tensor_code() {
        let t = Tiling::generate(Schlafli { n: 4, k: 5 }, 0).unwrap();
        let code = contract(&t, &StabilizerTensor::five_qubit()).unwrap();
        assert_eq!(code.n(), 5);
        assert_eq!(code.bulk_count(), 1);
        assert_eq!(code.stabilizers().rank(), 4);
    }

    #[test]
    fn leg_mismatch_is_reported() {
        let t = Tiling::generate(Schlafli { n: 3, k: 7 }, 1).unwrap();
        assert!(matches!(
            contract(&t, &StabilizerTensor::five_qubit()),
            Err(Error::LegMismatch { planar: 5, degree: 7 })
        ));
    }

    #[test]
    fn happy_layers_are_isometric() {
        for layers in [1, 2] {
            let t = Tiling::generate(Schlafli { n: 4, k: 5 }, layers).unwrap();
            let code = contract(&t, &StabilizerTensor::five_qubit()).unwrap();
            assert_eq!(code.n(), t.boundary_len());
            assert_eq!(code.bulk_count(), t.vertex_count());
            assert!(code.is_exact());
        }
    }
}
