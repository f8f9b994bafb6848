//! Logical gates, certificates and pushing schedules.
//!
//! Physical circuits are Clifford tableaus built from a small gate set.
//! [`logical_action`] reads off what a circuit does to the logical qubits,
//! [`py_certify`] checks the region conditions that bound the Clifford level
//! of any locality-preserving circuit, and [`theorem_report`] assembles those
//! regions from distance scans.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use rand::Rng;

use crate::code::SubsystemCode;
use crate::dense::{self, C64};
use crate::error::{Error, Result};
use crate::metrics::{self, Scan};
use crate::par;
use crate::region::{ring_distance, Region};
use crate::regions::{self, LogicalGenerator, Split};
use crate::symplectic::{Letter, Pauli};
use crate::tiling::{Slot, SlotRole, Tiling, VertexType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    /// `X -> Z -> Y -> X`.
    K(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cx(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::K(_) => "K",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::Cx(..) => "CX",
            Gate::Cz(..) => "CZ",
            Gate::Swap(..) => "SWAP",
        }
    }

    pub fn sites(&self) -> Vec<usize> {
        match *self {
            Gate::H(a) | Gate::S(a) | Gate::K(a) | Gate::X(a) | Gate::Y(a) | Gate::Z(a) => vec![a],
            Gate::Cx(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) => vec![a, b],
        }
    }

    /// `p ← G p G†`.
    pub fn conjugate(&self, p: &mut Pauli) {
        let bit = |p: &Pauli, j: usize| (p.x(j) as u8, p.z(j) as u8);
        match *self {
            Gate::H(j) => {
                let (x, z) = bit(p, j);
                p.set_bits(j, z == 1, x == 1);
                p.add_phase(2 * (x & z));
            }
            Gate::S(j) => {
                let (x, z) = bit(p, j);
                p.set_bits(j, x == 1, (x ^ z) == 1);
                p.add_phase(x);
            }
            Gate::K(j) => {
                let (x, z) = bit(p, j);
                p.set_bits(j, z == 1, (x ^ z) == 1);
                p.add_phase(z + 2 * (x & z));
            }
            Gate::X(j) => p.add_phase(2 * bit(p, j).1),
            Gate::Z(j) => p.add_phase(2 * bit(p, j).0),
            Gate::Y(j) => {
                let (x, z) = bit(p, j);
                p.add_phase(2 * (x ^ z));
            }
            Gate::Cx(c, t) => {
                let (xc, zc) = bit(p, c);
                let (xt, zt) = bit(p, t);
                p.set_bits(t, (xt ^ xc) == 1, zt == 1);
                p.set_bits(c, xc == 1, (zc ^ zt) == 1);
            }
            Gate::Cz(a, b) => {
                let (xa, za) = bit(p, a);
                let (xb, zb) = bit(p, b);
                p.set_bits(a, xa == 1, (za ^ xb) == 1);
                p.set_bits(b, xb == 1, (zb ^ xa) == 1);
                p.add_phase(2 * (xa & xb));
            }
            Gate::Swap(a, b) => {
                let (xa, za) = bit(p, a);
                let (xb, zb) = bit(p, b);
                p.set_bits(a, xb == 1, zb == 1);
                p.set_bits(b, xa == 1, za == 1);
            }
        }
    }

    /// `psi ← G psi`.
    fn apply_dense(&self, psi: &mut [C64]) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let single = |psi: &mut [C64], j: usize, m: [[C64; 2]; 2]| {
            for b in 0..psi.len() {
                if b >> j & 1 == 0 {
                    let (a0, a1) = (psi[b], psi[b | 1 << j]);
                    psi[b] = m[0][0] * a0 + m[0][1] * a1;
                    psi[b | 1 << j] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        };
        let hc = C64::new(h, 0.0);
        match *self {
            Gate::H(j) => single(psi, j, [[hc, hc], [hc, -hc]]),
            Gate::S(j) => single(psi, j, [[one, zero], [zero, i]]),
            // K = S·H
            Gate::K(j) => single(psi, j, [[hc, hc], [i * hc, -i * hc]]),
            Gate::X(j) => single(psi, j, [[zero, one], [one, zero]]),
            Gate::Y(j) => single(psi, j, [[zero, -i], [i, zero]]),
            Gate::Z(j) => single(psi, j, [[one, zero], [zero, -one]]),
            Gate::Cx(c, t) => {
                for b in 0..psi.len() {
                    if b >> c & 1 == 1 && b >> t & 1 == 0 {
                        psi.swap(b, b | 1 << t);
                    }
                }
            }
            Gate::Cz(a, b) => {
                for (idx, amp) in psi.iter_mut().enumerate() {
                    if idx >> a & 1 == 1 && idx >> b & 1 == 1 {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Swap(a, b) => {
                for idx in 0..psi.len() {
                    if idx >> a & 1 == 1 && idx >> b & 1 == 0 {
                        psi.swap(idx, idx ^ (1 << a) ^ (1 << b));
                    }
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G {}", self.name())?;
        for s in self.sites() {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// Images of `X_j` and `Z_j` under conjugation by a Clifford circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    /// `[X_0, Z_0, X_1, Z_1, ...]`.
    images: Vec<Pauli>,
}

impl Tableau {
    pub fn identity(n: usize) -> Self {
        let images = (0..n)
            .flat_map(|j| [Pauli::single(n, j, Letter::X), Pauli::single(n, j, Letter::Z)])
            .collect();
        Tableau { n, images }
    }

    /// From explicit images; checks the canonical commutation relations.
    pub fn from_images(images: Vec<(Pauli, Pauli)>) -> Result<Self> {
        let n = images.len();
        let flat: Vec<Pauli> = images.into_iter().flat_map(|(x, z)| [x, z]).collect();
        for (a, p) in flat.iter().enumerate() {
            if p.n() != n {
                return Err(Error::LengthMismatch(n, p.n()));
            }
            if !p.is_hermitian() {
                return Err(Error::Input(format!("tableau image {p} is not Hermitian")));
            }
            for (b, q) in flat.iter().enumerate().skip(a + 1) {
                let expect = a / 2 == b / 2;
                if p.anticommutes_with(q) != expect {
                    return Err(Error::Input("tableau images break the commutation relations".into()));
                }
            }
        }
        Ok(Tableau { n, images: flat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image_x(&self, j: usize) -> &Pauli {
        &self.images[2 * j]
    }

    pub fn image_z(&self, j: usize) -> &Pauli {
        &self.images[2 * j + 1]
    }

    /// `U p U†`.
    pub fn conjugate(&self, p: &Pauli) -> Pauli {
        assert_eq!(p.n(), self.n, "Pauli length mismatch");
        let mut out = Pauli::identity(self.n);
        out.set_phase(p.phase());
        for j in p.support().iter() {
            if p.x(j) {
                out.mul_assign(&self.images[2 * j]);
            }
            if p.z(j) {
                out.mul_assign(&self.images[2 * j + 1]);
            }
        }
        out
    }

    /// Apply a gate after the circuit so far.
    pub fn push_gate(&mut self, g: &Gate) {
        for img in self.images.iter_mut() {
            g.conjugate(img);
        }
    }

    /// The circuit `self` followed by `next`.
    pub fn then(&self, next: &Tableau) -> Tableau {
        Tableau {
            n: self.n,
            images: self.images.iter().map(|p| next.conjugate(p)).collect(),
        }
    }

    /// Maximum boundary distance by which a single-site Pauli grows.
    pub fn spread(&self) -> usize {
        let n = self.n;
        (0..n)
            .map(|j| {
                let x = &self.images[2 * j];
                let z = &self.images[2 * j + 1];
                x.support()
                    .union(&z.support())
                    .iter()
                    .map(|i| ring_distance(n, i, j))
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }
}

/// A physical Clifford circuit on the boundary qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    n: usize,
    gates: Vec<Gate>,
    tableau: Tableau,
}

impl Layout {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut tableau = Tableau::identity(n);
        for g in &gates {
            let sites = g.sites();
            if let Some(&bad) = sites.iter().find(|&&s| s >= n) {
                return Err(Error::Input(format!("gate {} acts on site {bad} of {n}", g.name())));
            }
            if sites.len() == 2 && sites[0] == sites[1] {
                return Err(Error::Input(format!("two-qubit gate {} needs distinct sites", g.name())));
            }
            tableau.push_gate(g);
        }
        Ok(Layout { n, gates, tableau })
    }

    pub fn identity(n: usize) -> Self {
        Layout::new(n, Vec::new()).unwrap()
    }

    /// The same gate on every site.
    pub fn uniform(n: usize, gate: fn(usize) -> Gate) -> Self {
        Layout::new(n, (0..n).map(gate).collect()).unwrap()
    }

    /// Site `j` carries single-qubit Clifford number `cliffords[j]`.
    pub fn transversal(cliffords: &[usize]) -> Self {
        let table = single_qubit_cliffords();
        let gates = cliffords
            .iter()
            .enumerate()
            .flat_map(|(j, &c)| table[c].word.iter().map(move |&g| g(j)))
            .collect();
        Layout::new(cliffords.len(), gates).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn spread(&self) -> usize {
        self.tableau.spread()
    }

    /// This circuit followed by `next`.
    pub fn then(&self, next: &Layout) -> Layout {
        assert_eq!(self.n, next.n);
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&next.gates);
        Layout {
            n: self.n,
            gates,
            tableau: self.tableau.then(&next.tableau),
        }
    }

    /// Dense unitary, column `b` the image of basis state `b`.
    pub fn dense(&self) -> DMatrix<C64> {
        assert!(self.n <= 12, "dense unitaries are for small circuits");
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            let mut psi = vec![C64::new(0.0, 0.0); dim];
            psi[b] = C64::new(1.0, 0.0);
            for g in &self.gates {
                g.apply_dense(&mut psi);
            }
            for (r, a) in psi.into_iter().enumerate() {
                m[(r, b)] = a;
            }
        }
        m
    }

    /// Text form: one `G <gate> <sites>` line per gate. A single-qubit gate
    /// may list several sites (or `all`) and is then applied to each.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut gates = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |tok: &str| raw.find(tok).map_or(1, |c| c + 1);
            let mut toks = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
            let tag = toks.next().unwrap();
            if tag != "G" {
                return Err(Error::parse(ln + 1, at(tag), &format!("expected `G`, found `{tag}`")));
            }
            let Some(name) = toks.next() else {
                return Err(Error::parse(ln + 1, raw.len() + 1, "missing gate name"));
            };
            let mut sites = Vec::new();
            for tok in toks {
                if tok == "all" {
                    sites.extend(0..n);
                    continue;
                }
                match tok.parse::<usize>() {
                    Ok(s) if s < n => sites.push(s),
                    Ok(s) => {
                        return Err(Error::parse(ln + 1, at(tok), &format!("site {s} out of range for {n} qubits")))
                    }
                    Err(_) => return Err(Error::parse(ln + 1, at(tok), &format!("bad site `{tok}`"))),
                }
            }
            if sites.is_empty() {
                return Err(Error::parse(ln + 1, raw.len() + 1, "gate has no sites"));
            }
            let single: Option<fn(usize) -> Gate> = match name.to_ascii_uppercase().as_str() {
                "H" => Some(Gate::H),
                "S" => Some(Gate::S),
                "K" => Some(Gate::K),
                "X" => Some(Gate::X),
                "Y" => Some(Gate::Y),
                "Z" => Some(Gate::Z),
                _ => None,
            };
            if let Some(g) = single {
                gates.extend(sites.into_iter().map(g));
                continue;
            }
            let double: fn(usize, usize) -> Gate = match name.to_ascii_uppercase().as_str() {
                "CX" | "CNOT" => Gate::Cx,
                "CZ" => Gate::Cz,
                "SWAP" => Gate::Swap,
                _ => return Err(Error::parse(ln + 1, at(name), &format!("unknown gate `{name}`"))),
            };
            if sites.len() != 2 || sites[0] == sites[1] {
                return Err(Error::parse(ln + 1, at(name), &format!("{name} needs two distinct sites")));
            }
            gates.push(double(sites[0], sites[1]));
        }
        Layout::new(n, gates)
    }

    pub fn to_text(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }
}

/// One of the 24 single-qubit Cliffords modulo phase.
#[derive(Clone, Debug)]
pub struct SingleQubitClifford {
    /// Shortest `H`/`S` word, applied left to right.
    pub word: Vec<fn(usize) -> Gate>,
    /// Image of `I, X, Y, Z` as `(letter, negative)`.
    pub images: [(Letter, bool); 4],
}

fn letter_index(l: Letter) -> usize {
    match l {
        Letter::I => 0,
        Letter::X => 1,
        Letter::Y => 2,
        Letter::Z => 3,
    }
}

/// Hermitian letter and sign of a single-site Pauli.
fn signed_letter(p: &Pauli) -> (Letter, bool) {
    let t = (4 + p.phase() as usize - p.y_count() % 4) % 4;
    (p.letter(0), t == 2)
}

/// The single-qubit Clifford group, identity first, in breadth-first order.
pub fn single_qubit_cliffords() -> &'static [SingleQubitClifford] {
    static TABLE: OnceLock<Vec<SingleQubitClifford>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let gens: [fn(usize) -> Gate; 2] = [Gate::H, Gate::S];
        let mut seen: Vec<(Pauli, Pauli)> = Vec::new();
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back((Vec::<fn(usize) -> Gate>::new(), Tableau::identity(1)));
        while let Some((word, t)) = queue.pop_front() {
            let key = (t.image_x(0).clone(), t.image_z(0).clone());
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let y = Pauli::from_letters(&[Letter::Y]);
            let img = |p: &Pauli| signed_letter(&t.conjugate(p));
            let images = [
                (Letter::I, false),
                img(&Pauli::single(1, 0, Letter::X)),
                img(&y),
                img(&Pauli::single(1, 0, Letter::Z)),
            ];
            for g in gens {
                let mut next = t.clone();
                next.push_gate(&g(0));
                let mut w = word.clone();
                w.push(g);
                queue.push_back((w, next));
            }
            out.push(SingleQubitClifford { word, images });
        }
        debug_assert_eq!(out.len(), 24);
        out
    })
}

/// Number of the single-qubit Clifford with the given images of `X` and `Z`.
pub fn clifford_index(x: (Letter, bool), z: (Letter, bool)) -> Option<usize> {
    single_qubit_cliffords()
        .iter()
        .position(|c| c.images[1] == x && c.images[3] == z)
}

/// `U p U†` for a transversal layout given by Clifford numbers.
pub fn conjugate_transversal(cliffords: &[usize], p: &Pauli) -> Pauli {
    let table = single_qubit_cliffords();
    let mut out = p.clone();
    let mut t = (4 + p.phase() as usize - p.y_count() % 4) % 4;
    for j in p.support().iter() {
        let (l, neg) = table[cliffords[j]].images[letter_index(p.letter(j))];
        if neg {
            t += 2;
        }
        let (x, z) = l.bits();
        out.set_bits(j, x, z);
    }
    out.set_phase(((t + out.y_count()) % 4) as u8);
    out
}

pub fn spread_of(layout: &Layout, code: &SubsystemCode) -> Result<usize> {
    if layout.n() != code.n() {
        return Err(Error::LengthMismatch(code.n(), layout.n()));
    }
    Ok(layout.spread())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionKind {
    Identity,
    Pauli,
    Clifford,
    /// A stabilizer is not mapped into the stabilizer group.
    NotCsp,
    /// The logical and junk subsystems are entangled by the action.
    NotProduct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalAction {
    pub kind: ActionKind,
    /// Logical sites, sorted; qubit `q` of `images` is bulk site `s[q]`.
    pub s: Vec<usize>,
    /// Images of `(X_q, Z_q)` on the `|s|` logical qubits.
    pub images: Vec<(Pauli, Pauli)>,
    /// Every junk logical is mapped to itself.
    pub junk_identity: bool,
    /// Offending stabilizer (`NotCsp`) or logical (`NotProduct`).
    pub witness: Option<Pauli>,
}

impl LogicalAction {
    pub fn rejected(&self) -> bool {
        matches!(self.kind, ActionKind::NotCsp | ActionKind::NotProduct)
    }

    /// Logical tableau on the `|s|` qubits.
    pub fn tableau(&self) -> Option<Tableau> {
        if self.rejected() {
            return None;
        }
        Some(Tableau {
            n: self.s.len(),
            images: self.images.iter().flat_map(|(x, z)| [x.clone(), z.clone()]).collect(),
        })
    }
}

/// Decomposition of a centralizer element: `q = i^phase · g · Π_k X̄_k^a Z̄_k^b`
/// with `g` a stabilizer.
struct Decomposition {
    a: Vec<bool>,
    b: Vec<bool>,
    phase: u8,
}

fn decompose(code: &SubsystemCode, q: &Pauli) -> Result<Decomposition> {
    let m = code.bulk_count();
    let mut l = Pauli::identity(code.n());
    let mut a = vec![false; m];
    let mut b = vec![false; m];
    for k in 0..m {
        a[k] = q.anticommutes_with(code.logical_z(k));
        b[k] = q.anticommutes_with(code.logical_x(k));
        if a[k] {
            l.mul_assign(code.logical_x(k));
        }
        if b[k] {
            l.mul_assign(code.logical_z(k));
        }
    }
    let mut w = q.clone();
    w.mul_assign(&l.dagger());
    let member = code
        .stabilizers()
        .member(&w)
        .ok_or_else(|| Error::Unsupported("logical operators do not span the centralizer of the stabilizers".into()))?;
    Ok(Decomposition {
        a,
        b,
        phase: (4 + w.phase() - member.phase) % 4,
    })
}

fn check_csp(code: &SubsystemCode, conj: &dyn Fn(&Pauli) -> Pauli) -> Option<Pauli> {
    code.stabilizers()
        .rows()
        .iter()
        .find(|g| !code.stabilizers().member(&conj(g)).is_some_and(|m| m.phase_match))
        .cloned()
}

fn action_from(code: &SubsystemCode, s: &[usize], conj: &dyn Fn(&Pauli) -> Pauli) -> Result<LogicalAction> {
    let m = code.bulk_count();
    let mut s: Vec<usize> = s.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&i| i >= m) {
        return Err(Error::Input(format!("bulk site {bad} out of range for {m} sites")));
    }
    let in_s = |k: usize| s.binary_search(&k).is_ok();
    let mut action = LogicalAction {
        kind: ActionKind::NotCsp,
        s: s.clone(),
        images: Vec::new(),
        junk_identity: false,
        witness: None,
    };
    if let Some(g) = check_csp(code, conj) {
        action.witness = Some(g);
        return Ok(action);
    }
    let mut junk_identity = true;
    for k in (0..m).filter(|&k| !in_s(k)) {
        for (is_z, l) in [(false, code.logical_x(k)), (true, code.logical_z(k))] {
            let d = decompose(code, &conj(l))?;
            if s.iter().any(|&i| d.a[i] || d.b[i]) {
                action.kind = ActionKind::NotProduct;
                action.witness = Some(l.clone());
                return Ok(action);
            }
            let same = (0..m).all(|j| d.a[j] == (j == k && !is_z) && d.b[j] == (j == k && is_z));
            junk_identity &= same && d.phase == 0;
        }
    }
    let mut kind = ActionKind::Identity;
    for (q, &i) in s.iter().enumerate() {
        let mut pair = Vec::with_capacity(2);
        for (is_z, l) in [(false, code.logical_x(i)), (true, code.logical_z(i))] {
            let d = decompose(code, &conj(l))?;
            if (0..m).any(|j| !in_s(j) && (d.a[j] || d.b[j])) {
                action.kind = ActionKind::NotProduct;
                action.witness = Some(l.clone());
                return Ok(action);
            }
            let xs: Vec<bool> = s.iter().map(|&j| d.a[j]).collect();
            let zs: Vec<bool> = s.iter().map(|&j| d.b[j]).collect();
            let mut img = Pauli::from_bits(&xs, &zs);
            img.set_phase(d.phase);
            let input = Pauli::single(s.len(), q, if is_z { Letter::Z } else { Letter::X });
            let same_bits = (0..s.len()).all(|j| img.x(j) == input.x(j) && img.z(j) == input.z(j));
            if !same_bits {
                kind = ActionKind::Clifford;
            } else if img != input && kind == ActionKind::Identity {
                kind = ActionKind::Pauli;
            }
            pair.push(img);
        }
        let z = pair.pop().unwrap();
        let x = pair.pop().unwrap();
        action.images.push((x, z));
    }
    action.kind = kind;
    action.junk_identity = junk_identity;
    Ok(action)
}

/// What `layout` does to the logical qubits `s`, the other bulk sites
/// being junk.
pub fn logical_action(code: &SubsystemCode, s: &[usize], layout: &Layout) -> Result<LogicalAction> {
    if layout.n() != code.n() {
        return Err(Error::LengthMismatch(code.n(), layout.n()));
    }
    action_from(code, s, &|p| layout.tableau().conjugate(p))
}

/// [`logical_action`] for a transversal layout given by Clifford numbers.
pub fn transversal_action(code: &SubsystemCode, s: &[usize], cliffords: &[usize]) -> Result<LogicalAction> {
    if cliffords.len() != code.n() {
        return Err(Error::LengthMismatch(code.n(), cliffords.len()));
    }
    action_from(code, s, &|p| conjugate_transversal(cliffords, p))
}

/// Clifford-hierarchy level of a tableau action; `None` when rejected.
/// Tableaus are always Clifford, so the level never exceeds 2.
pub fn classify_level(action: &LogicalAction) -> Option<usize> {
    match action.kind {
        ActionKind::Identity => Some(0),
        ActionKind::Pauli => Some(1),
        ActionKind::Clifford => Some(2),
        ActionKind::NotCsp | ActionKind::NotProduct => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Dressed,
    Bare,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Dressed => "dressed",
            Variant::Bare => "bare",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Correctable,
    PauliDressedCleanable,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Correctable => "correctable",
            Property::PauliDressedCleanable => "pauli-dressed-cleanable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionCheck {
    pub index: usize,
    pub region: Region,
    pub inflation: usize,
    pub inflated: Region,
    pub property: Property,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub code_id: String,
    pub s: Vec<usize>,
    pub spread: usize,
    pub variant: Variant,
    pub level: usize,
    pub checks: Vec<RegionCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFailure {
    pub check: RegionCheck,
    pub logical: LogicalGenerator,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "certificate code={} s={:?} spread={} variant={} level={}",
            self.code_id, self.s, self.spread, self.variant, self.level
        )?;
        for c in &self.checks {
            writeln!(f, "  R{} = {} inflated by {} -> {} : {}", c.index, c.region, c.inflation, c.inflated, c.property)?;
        }
        Ok(())
    }
}

impl fmt::Display for CertificateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R{} = {} inflated by {} -> {} is not {} (logical {} cannot be cleaned off it)",
            self.check.index, self.check.region, self.check.inflation, self.check.inflated, self.check.property, self.logical
        )
    }
}

/// Stable short identifier of a code (FNV-1a of its text form).
pub fn code_id(code: &SubsystemCode) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in code.to_text().bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

pub fn py_certify(
    code: &SubsystemCode,
    s: &[usize],
    parts: &[Region],
    s_u: usize,
    variant: Variant,
) -> Result<std::result::Result<Certificate, CertificateFailure>> {
    let n = code.n();
    if parts.len() < 2 {
        return Err(Error::Input("a certificate needs at least two regions".into()));
    }
    let mut covered = Region::empty(n);
    for r in parts {
        if r.n() != n {
            return Err(Error::LengthMismatch(n, r.n()));
        }
        if !r.intersection(&covered).is_empty() {
            return Err(Error::Input(format!("region {r} overlaps an earlier region")));
        }
        covered = covered.union(r);
    }
    if covered.len() != n {
        return Err(Error::Input("regions do not cover the boundary".into()));
    }
    let m = parts.len() - 1;
    let split = Split::new(code, s)?;
    let checks: Vec<RegionCheck> = parts
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let (inflation, property) = match (variant, j) {
                (Variant::Dressed, 0) => (0, Property::Correctable),
                (Variant::Bare, 0) => (0, Property::PauliDressedCleanable),
                (Variant::Dressed, j) => ((1usize << (m - j)) * s_u, Property::PauliDressedCleanable),
                (Variant::Bare, j) => ((1usize << (j - 1)) * s_u, Property::PauliDressedCleanable),
            };
            RegionCheck {
                index: j,
                region: r.clone(),
                inflation,
                inflated: r.ball(inflation),
                property,
            }
        })
        .collect();
    let failures = par::map(&checks, |c| split.uncleanable(c.inflated.sites(), c.property == Property::PauliDressedCleanable));
    if let Some((c, g)) = checks.iter().zip(&failures).find_map(|(c, f)| f.map(|g| (c, g))) {
        return Ok(Err(CertificateFailure {
            check: c.clone(),
            logical: g,
        }));
    }
    Ok(Ok(Certificate {
        code_id: code_id(code),
        s: split.logical().to_vec(),
        spread: s_u,
        variant,
        level: m,
        checks,
    }))
}

/// Re-run every check of a certificate against the regions module.
pub fn verify_certificate(code: &SubsystemCode, cert: &Certificate) -> Result<bool> {
    for c in &cert.checks {
        let expect = c.region.ball(c.inflation);
        if expect != c.inflated {
            return Ok(false);
        }
        let ok = match c.property {
            Property::Correctable => regions::is_correctable(code, &c.inflated, &cert.s)?,
            Property::PauliDressedCleanable => regions::is_pauli_dressed_cleanable(code, &c.inflated, &cert.s)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Levels reached by all transversal single-qubit Clifford layouts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransversalCensus {
    pub layouts: u64,
    pub csp: u64,
    pub not_product: u64,
    /// Product CSP layouts by level.
    pub levels: [u64; 3],
    /// Those among them acting as the identity on the junk.
    pub bare_levels: [u64; 3],
    /// First layout reaching each level.
    pub examples: [Option<Vec<usize>>; 3],
    pub bare_examples: [Option<Vec<usize>>; 3],
    pub exhaustive: bool,
}

impl TransversalCensus {
    pub fn max_level(&self) -> Option<usize> {
        (0..3).rev().find(|&l| self.levels[l] > 0)
    }

    pub fn max_bare_level(&self) -> Option<usize> {
        (0..3).rev().find(|&l| self.bare_levels[l] > 0)
    }

    fn absorb(&mut self, other: TransversalCensus) {
        self.layouts += other.layouts;
        self.csp += other.csp;
        self.not_product += other.not_product;
        for l in 0..3 {
            self.levels[l] += other.levels[l];
            self.bare_levels[l] += other.bare_levels[l];
            if self.examples[l].is_none() {
                self.examples[l] = other.examples[l].clone();
            }
            if self.bare_examples[l].is_none() {
                self.bare_examples[l] = other.bare_examples[l].clone();
            }
        }
    }

    fn record(&mut self, code: &SubsystemCode, s: &[usize], cliffords: &[usize]) -> Result<()> {
        self.layouts += 1;
        if check_csp(code, &|p| conjugate_transversal(cliffords, p)).is_some() {
            return Ok(());
        }
        self.csp += 1;
        let a = transversal_action(code, s, cliffords)?;
        let Some(level) = classify_level(&a) else {
            self.not_product += 1;
            return Ok(());
        };
        self.levels[level] += 1;
        self.examples[level].get_or_insert_with(|| cliffords.to_vec());
        if a.junk_identity {
            self.bare_levels[level] += 1;
            self.bare_examples[level].get_or_insert_with(|| cliffords.to_vec());
        }
        Ok(())
    }
}

/// Enumerate all `24^n` transversal layouts (`n <= 5`), or `samples`
/// seeded random ones.
pub fn transversal_census(code: &SubsystemCode, s: &[usize], samples: Option<(u64, u64)>) -> Result<TransversalCensus> {
    let n = code.n();
    match samples {
        None => {
            if n > 5 {
                return Err(Error::Unsupported(format!("exhaustive enumeration of 24^{n} layouts; sample instead")));
            }
            let head = if n >= 2 { 24 * 24 } else { 24usize.pow(n as u32) };
            let tail = 24usize.pow(n.saturating_sub(2) as u32);
            let parts = par::map_range(head, |h| -> Result<TransversalCensus> {
                let mut census = TransversalCensus::default();
                let mut c = vec![0usize; n];
                for t in 0..tail {
                    let mut idx = h * tail + t;
                    for slot in c.iter_mut().rev() {
                        *slot = idx % 24;
                        idx /= 24;
                    }
                    census.record(code, s, &c)?;
                }
                Ok(census)
            });
            let mut total = TransversalCensus {
                exhaustive: true,
                ..Default::default()
            };
            for p in parts {
                total.absorb(p?);
            }
            Ok(total)
        }
        Some((count, seed)) => {
            use rand::SeedableRng;
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let layouts: Vec<Vec<usize>> = (0..count).map(|_| (0..n).map(|_| rng.gen_range(0..24)).collect()).collect();
            let parts = par::map(&layouts, |c| -> Result<TransversalCensus> {
                let mut census = TransversalCensus::default();
                census.record(code, s, c)?;
                Ok(census)
            });
            let mut total = TransversalCensus::default();
            for p in parts {
                total.absorb(p?);
            }
            Ok(total)
        }
    }
}

/// Limits for [`theorem_report`].
#[derive(Clone, Debug)]
pub struct TheoremConfig {
    /// Largest hierarchy level with a reported threshold.
    pub level_cap: usize,
    /// Size cutoff of the unrestricted distance scan.
    pub cutoff: usize,
    /// Subsets tested by the unrestricted distance scan.
    pub distance_budget: u64,
}

impl Default for TheoremConfig {
    fn default() -> Self {
        TheoremConfig {
            level_cap: 5,
            cutoff: metrics::DEFAULT_CUTOFF,
            distance_budget: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadThreshold {
    pub level: usize,
    /// The bound reads `s_U < d_c / denominator`.
    pub denominator: usize,
    /// Largest integer spread under the bound.
    pub max_spread: usize,
    /// Largest spread for which whole-site pieces of the split fit.
    pub split_spread: Option<usize>,
    /// `R_0 .. R_m` at `split_spread`.
    pub partition: Option<Vec<Region>>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub s: Vec<usize>,
    pub d_c: Option<usize>,
    pub d_c_witness: Option<Region>,
    /// Unrestricted distance, possibly cut off.
    pub d: Scan,
    pub connected_regions: usize,
    pub connected_cr_failures: usize,
    pub max_residual: usize,
    /// Every connected region obeys complementary recovery and `d_c >= 2`.
    pub all_connected_cr: bool,
    /// Non-correctable connected region with `2 <= |R| <= 2 d_c - 2` obeying
    /// complementary recovery (single-site `s`).
    pub cr_witness: Option<Region>,
    /// Bulk diameter of `s`.
    pub diameter: Option<usize>,
    /// `(R, κ_R(D_S))` with `2 <= |R| <= 2 d_c - 2 - κ`.
    pub kappa_witness: Option<(Region, usize)>,
    /// The first non-correctable CR interval with `|R| <= 2 d_c - 2` and
    /// its `κ_R(D_S)` if that fits the window.
    pub kappa_probe: Option<(Region, Option<usize>)>,
    /// `(R, κ, ε)` with `|R| <= 2 d - 2 - κ - ε`, using the lower bound on
    /// `d` when the scan was cut off.
    pub approx_witness: Option<(Region, usize, usize)>,
    /// Non-correctable interval obeying complementary recovery that the
    /// threshold partitions split: of length `d_c` when one exists,
    /// otherwise the shortest one.
    pub split_region: Option<Region>,
    /// `split_region` has length exactly `d_c`.
    pub exact_hypothesis: bool,
    pub thresholds: Vec<SpreadThreshold>,
}

fn diameter_of(code: &SubsystemCode, s: &[usize]) -> Option<usize> {
    let dist = code.bulk_distances()?;
    let mut d = 0;
    for &a in s {
        for &b in s {
            d = d.max(dist[a][b]);
        }
    }
    Some(d)
}

/// Piece lengths `|R_1| .. |R_m|` summing to `total`, with every inflated
/// piece `|R_j| + 2·2^{m-j}·s` shorter than `d_c`, close to proportions
/// `2^{j-1}`.
pub fn split_sizes(total: usize, d_c: usize, m: usize, s: usize) -> Option<Vec<usize>> {
    let caps: Vec<i64> = (1..=m)
        .map(|j| d_c as i64 - 1 - 2 * (1i64 << (m - j)) * s as i64)
        .collect();
    if caps.iter().any(|&c| c < 1) || caps.iter().sum::<i64>() < total as i64 || total < m {
        return None;
    }
    let denom = (1i64 << m) - 1;
    let mut sizes: Vec<i64> = (1..=m)
        .map(|j| ((1i64 << (j - 1)) * total as i64 / denom).clamp(1, caps[j - 1]))
        .collect();
    let mut sum: i64 = sizes.iter().sum();
    while sum < total as i64 {
        let j = (0..m)
            .filter(|&j| sizes[j] < caps[j])
            .max_by_key(|&j| (1i64 << j) * total as i64 - sizes[j] * denom)?;
        sizes[j] += 1;
        sum += 1;
    }
    while sum > total as i64 {
        let j = (0..m)
            .filter(|&j| sizes[j] > 1)
            .min_by_key(|&j| (1i64 << j) * total as i64 - sizes[j] * denom)?;
        sizes[j] -= 1;
        sum -= 1;
    }
    Some(sizes.into_iter().map(|v| v as usize).collect())
}

/// `R_0 = R^c` and `R_1..R_m` consecutive pieces of the interval `r`.
pub fn split_interval(r: &Region, sizes: &[usize]) -> Option<Vec<Region>> {
    let (start, len) = r.as_interval()?;
    if sizes.iter().sum::<usize>() != len {
        return None;
    }
    let n = r.n();
    let mut out = vec![r.complement()];
    let mut at = start;
    for &sz in sizes {
        out.push(Region::interval(n, at % n, sz));
        at += sz;
    }
    Some(out)
}

pub fn theorem_report(code: &SubsystemCode, s: &[usize], config: &TheoremConfig) -> Result<TheoremReport> {
    if s.is_empty() {
        return Err(Error::Input("the theorem report needs a nonempty logical set".into()));
    }
    let n = code.n();
    let split = Split::new(code, s)?;
    let s = split.logical().to_vec();
    let dc = metrics::connected_distance(code, &s)?;
    let d = metrics::distance_budgeted(code, &s, config.cutoff, config.distance_budget)?;
    let (d_c, d_c_witness) = match &dc {
        Some((v, w)) => (Some(*v), Some(w.clone())),
        None => (None, None),
    };

    let intervals = crate::region::all_intervals(n);
    let correctable = par::map(&intervals, |r| split.correctable(r.sites()));
    let reports = regions::cr_scan_connected(code);
    let failures = reports.iter().filter(|w| !w.complementary).count();
    let max_residual = reports.iter().map(|w| w.residual.len()).max().unwrap_or(0);
    let all_connected_cr = failures == 0 && d_c.is_some_and(|v| v >= 2);

    // Non-correctable CR intervals, by length then start.
    let candidates: Vec<usize> = (0..intervals.len())
        .filter(|&i| !correctable[i] && reports[i].complementary && intervals[i].len() >= 2)
        .collect();
    let cr_witness = match d_c {
        Some(dc) if s.len() == 1 => candidates
            .iter()
            .map(|&i| &intervals[i])
            .find(|r| r.len() + 2 <= 2 * dc)
            .cloned(),
        _ => None,
    };

    let diameter = if s.len() == 1 { Some(0) } else { diameter_of(code, &s) };
    let mut kappa_witness = None;
    let mut kappa_probe = None;
    if let (Some(dc), Some(ds)) = (d_c, diameter) {
        for &i in &candidates {
            let r = &intervals[i];
            if r.len() + 2 > 2 * dc {
                break;
            }
            let room = 2 * dc - 2 - r.len();
            let kap = if ds == 0 { Some(0) } else { regions::kappa_within(code, r, ds, room)? };
            if kappa_probe.is_none() {
                kappa_probe = Some((r.clone(), kap));
            }
            if let Some(kap) = kap {
                kappa_witness = Some((r.clone(), kap));
                break;
            }
        }
    }

    // ε-almost CR with the unrestricted distance (or its lower bound).
    let d_bound = match &d {
        Scan::Found { value, .. } => *value,
        Scan::Exceeded { cutoff } => cutoff + 1,
    };
    let mut approx_witness = None;
    if let Some(ds) = diameter {
        for i in 0..intervals.len() {
            let r = &intervals[i];
            if correctable[i] || r.len() < 2 {
                continue;
            }
            if r.len() + 2 > 2 * d_bound {
                break;
            }
            let Some(eps) = reports[i].epsilon else { continue };
            if r.len() + 2 + eps > 2 * d_bound {
                continue;
            }
            let room = 2 * d_bound - 2 - r.len() - eps;
            let kap = if ds == 0 { Some(0) } else { regions::kappa_within(code, r, ds, room)? };
            if let Some(kap) = kap {
                approx_witness = Some((r.clone(), kap, eps));
                break;
            }
        }
    }

    // Region obeying complementary recovery to split into pieces.
    let exact = d_c.and_then(|dc| {
        candidates
            .iter()
            .find(|&&i| intervals[i].len() == dc)
            .map(|&i| intervals[i].clone())
    });
    let exact_hypothesis = exact.is_some();
    let split_region = exact.or_else(|| {
        let dc = d_c?;
        candidates
            .first()
            .map(|&i| intervals[i].clone())
            .filter(|r| r.len() + 2 <= 2 * dc)
    });
    let mut thresholds = Vec::new();
    if let Some(dc) = d_c {
        for level in 2..=config.level_cap {
            let denominator = 2 * ((1usize << level) - 1);
            let max_spread = dc.div_ceil(denominator) - 1;
            let mut entry = SpreadThreshold {
                level,
                denominator,
                max_spread,
                split_spread: None,
                partition: None,
                certificate: None,
            };
            if let Some(r) = &split_region {
                for s_u in (0..=max_spread).rev() {
                    let Some(sizes) = split_sizes(r.len(), dc, level, s_u) else { continue };
                    let parts = split_interval(r, &sizes).expect("sizes sum to the interval length");
                    entry.split_spread = Some(s_u);
                    if let Ok(cert) = py_certify(code, &s, &parts, s_u, Variant::Dressed)? {
                        entry.certificate = Some(cert);
                    }
                    entry.partition = Some(parts);
                    break;
                }
            }
            thresholds.push(entry);
        }
    }

    Ok(TheoremReport {
        s,
        d_c,
        d_c_witness,
        d,
        connected_regions: intervals.len(),
        connected_cr_failures: failures,
        max_residual,
        all_connected_cr,
        cr_witness,
        diameter,
        kappa_witness,
        kappa_probe,
        approx_witness,
        split_region,
        exact_hypothesis,
        thresholds,
    })
}

/// How an operator leaves a vertex through one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// Into the vertex's own replacement (or from the centre into `b_j`).
    Forward,
    /// To a neighbour in the same layer.
    Sideways,
    /// To the `c` in the right neighbour's replacement.
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Protocol {
    /// `n > 3`, `k >= 7`: push into the first `N` replacement vertices.
    Generic,
    /// `n = 3`, `k >= 11`.
    GenericTriangle,
    /// `{n > 3, 5}`.
    CaseA,
    /// `{3, 9}`.
    CaseB,
    /// `{3, 7}`.
    CaseC,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushStep {
    pub vertex: usize,
    pub layer: usize,
    pub incoming: Vec<usize>,
    pub outgoing: Vec<(usize, Move)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushSchedule {
    pub targets: Vec<usize>,
    pub steps: Vec<PushStep>,
    /// Boundary positions reached.
    pub support: Vec<usize>,
    /// Union of the target sectors' boundary blocks.
    pub allowed: Vec<usize>,
    pub contained: bool,
    /// The operator entering each `b_j` stays inside sector `j`.
    pub per_sector: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushReport {
    pub protocol: Protocol,
    pub schedule: PushSchedule,
    /// Targets `1..N`, `2..N+1` and `N+1..2N-1, 1`.
    pub covers: [Vec<usize>; 3],
    pub cover_regions: [Region; 3],
    pub cover_schedules: [PushSchedule; 3],
    pub triple_intersection_empty: bool,
}

pub fn protocol_for(t: &Tiling) -> Result<Protocol> {
    let (n, k) = (t.schlafli.n, t.schlafli.k);
    if k == 3 {
        return Err(Error::Input(format!("{{{n},3}}: the network is not an isometry")));
    }
    if k % 2 == 0 {
        return Err(Error::Unsupported(format!("{{{n},{k}}}: even degree has no single-bulk-leg perfect tensor")));
    }
    Ok(match (n, k) {
        (3, 7) => Protocol::CaseC,
        (3, 9) => Protocol::CaseB,
        (3, _) => Protocol::GenericTriangle,
        (_, 5) => Protocol::CaseA,
        _ => Protocol::Generic,
    })
}

struct Pusher<'a> {
    t: &'a Tiling,
    protocol: Protocol,
    half: usize,
    /// Position of each vertex in its layer list.
    pos: Vec<usize>,
    in_block: Vec<bool>,
}

impl<'a> Pusher<'a> {
    fn slot_of(&self, v: usize, role: SlotRole) -> usize {
        self.t.roles(v).iter().position(|&r| r == role).expect("slot role exists")
    }

    fn child_slots(&self, v: usize) -> Vec<usize> {
        (0..self.t.roles(v).len())
            .filter(|&s| matches!(self.t.role(v, s), SlotRole::Child(_)))
            .collect()
    }

    /// Number of children that come from `v`'s own replacement.
    fn own_children(&self, v: usize) -> usize {
        let kids = self.child_slots(v);
        if self.t.schlafli.n == 3 && kids.len() > 0 {
            // The last child is the right neighbour's `c`.
            kids.len() - 1
        } else {
            kids.len()
        }
    }

    fn neighbour(&self, v: usize, step: isize) -> usize {
        let list = &self.t.layer_lists[self.t.vertices[v].layer];
        let p = (self.pos[v] as isize + step).rem_euclid(list.len() as isize) as usize;
        list[p]
    }

    /// Cyclic distance to the nearest same-sector `a` to the left and right.
    fn nearest_a(&self, v: usize) -> (Option<usize>, Option<usize>) {
        let list = &self.t.layer_lists[self.t.vertices[v].layer];
        let sector = self.t.vertices[v].sector;
        let find = |step: isize| {
            (1..list.len()).find(|&d| {
                let u = self.neighbour(v, step * d as isize);
                self.t.vertices[u].kind == VertexType::A && self.t.vertices[u].sector == sector
            })
        };
        (find(-1), find(1))
    }

    fn is_rightmost(&self, v: usize) -> bool {
        self.in_block[v] && !self.in_block[self.neighbour(v, 1)]
    }

    fn outgoing(&self, v: usize, incoming: &[usize], targets: &[usize]) -> Result<Vec<(usize, Move)>> {
        let vert = &self.t.vertices[v];
        let kids = self.child_slots(v);
        let forward = |count: usize| -> Vec<(usize, Move)> { kids[..count.min(kids.len())].iter().map(|&s| (s, Move::Forward)).collect() };
        let prev = || self.slot_of(v, SlotRole::Prev);
        let next = || self.slot_of(v, SlotRole::Next);
        if vert.kind == VertexType::I {
            return Ok(targets.iter().map(|&j| (j - 1, Move::Forward)).collect());
        }
        let n_half = self.half;
        let out = match (self.protocol, vert.kind) {
            (Protocol::Generic, _) | (Protocol::GenericTriangle, _) => forward(n_half),
            (Protocol::CaseA, VertexType::A) => forward(n_half),
            (Protocol::CaseA, _) => {
                let mut o = forward(n_half - 1);
                let from_left = incoming.contains(&prev());
                let from_right = incoming.contains(&next());
                let go_right = if from_left {
                    true
                } else if from_right {
                    false
                } else {
                    match self.nearest_a(v) {
                        (Some(l), Some(r)) => r <= l,
                        (None, Some(_)) => true,
                        (Some(_), None) => false,
                        (None, None) => {
                            return Err(Error::Unsupported(format!("vertex {v} has no a-type vertex in its sector")))
                        }
                    }
                };
                o.push((if go_right { next() } else { prev() }, Move::Sideways));
                o
            }
            (Protocol::CaseB, VertexType::B) => forward(n_half),
            (Protocol::CaseB, _) => {
                let mut o = forward(self.own_children(v));
                o.push((next(), Move::Sideways));
                o
            }
            (Protocol::CaseC, VertexType::B) if self.is_rightmost(v) => {
                let mut o = vec![(prev(), Move::Sideways)];
                o.extend(forward(self.own_children(v)));
                o
            }
            (Protocol::CaseC, VertexType::B) => {
                let mut o = forward(self.own_children(v));
                o.push((*kids.last().unwrap(), Move::Diagonal));
                o
            }
            (Protocol::CaseC, _) => {
                let mut o = forward(self.own_children(v));
                o.push((*kids.last().unwrap(), Move::Diagonal));
                let right = self.neighbour(v, 1);
                if self.is_rightmost(right) {
                    o.push((prev(), Move::Sideways));
                } else {
                    o.push((next(), Move::Sideways));
                }
                o
            }
        };
        Ok(out)
    }

    fn run(&self, targets: &[usize]) -> Result<PushSchedule> {
        let t = self.t;
        let nv = t.vertex_count();
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); nv];
        // Origin sectors carried into each vertex.
        let mut origins: Vec<Vec<usize>> = vec![Vec::new(); nv];
        let mut out: Vec<Option<Vec<(usize, Move)>>> = vec![None; nv];
        let mut active = vec![false; nv];
        active[0] = true;
        let mut steps = Vec::new();
        let mut support = Vec::new();
        let mut boundary_origins: Vec<(usize, Vec<usize>)> = Vec::new();
        let deliver = |v: usize,
                           moves: &[(usize, Move)],
                           from: &[usize],
                           incoming: &mut Vec<Vec<usize>>,
                           origins: &mut Vec<Vec<usize>>,
                           active: &mut Vec<bool>,
                           support: &mut Vec<usize>,
                           boundary_origins: &mut Vec<(usize, Vec<usize>)>| {
            for &(slot, _) in moves {
                match t.vertices[v].slots[slot] {
                    Slot::Edge { to, slot: back } => {
                        if !incoming[to].contains(&back) {
                            incoming[to].push(back);
                        }
                        for &o in from {
                            if !origins[to].contains(&o) {
                                origins[to].push(o);
                            }
                        }
                        active[to] = true;
                    }
                    Slot::Boundary(b) => {
                        support.push(b);
                        boundary_origins.push((b, from.to_vec()));
                    }
                }
            }
        };

        // Centre.
        let centre_out = self.outgoing(0, &[], targets)?;
        for &(slot, _) in &centre_out {
            if let Slot::Edge { to, slot: back } = t.vertices[0].slots[slot] {
                incoming[to].push(back);
                origins[to].push(t.vertices[to].sector.unwrap());
                active[to] = true;
            } else if let Slot::Boundary(b) = t.vertices[0].slots[slot] {
                support.push(b);
                boundary_origins.push((b, vec![slot + 1]));
            }
        }
        steps.push(PushStep {
            vertex: 0,
            layer: 0,
            incoming: Vec::new(),
            outgoing: centre_out,
        });

        for layer in 1..=t.layers {
            let list = &t.layer_lists[layer];
            let base_incoming: Vec<Vec<usize>> = list.iter().map(|&v| incoming[v].clone()).collect();
            let base_active: Vec<bool> = list.iter().map(|&v| active[v]).collect();
            let at: std::collections::HashMap<usize, usize> = list.iter().enumerate().map(|(p, &v)| (v, p)).collect();
            // Sideways pushes depend on what a vertex receives; iterate to a
            // fixed point, rebuilding same-layer deliveries every round.
            let mut rounds = 0;
            loop {
                rounds += 1;
                if rounds > 4 * list.len() + 4 {
                    return Err(Error::Unsupported("pushing schedule does not settle".into()));
                }
                let mut inc = base_incoming.clone();
                let mut act = base_active.clone();
                for &v in list {
                    if !active[v] {
                        out[v] = None;
                        continue;
                    }
                    let o = self.outgoing(v, &incoming[v], targets)?;
                    for &(slot, _) in &o {
                        if let Slot::Edge { to, slot: back } = t.vertices[v].slots[slot] {
                            if let Some(&q) = at.get(&to) {
                                if !inc[q].contains(&back) {
                                    inc[q].push(back);
                                }
                                act[q] = true;
                            }
                        }
                    }
                    out[v] = Some(o);
                }
                let stable = list
                    .iter()
                    .enumerate()
                    .all(|(q, &v)| act[q] == active[v] && inc[q] == incoming[v]);
                for (q, &v) in list.iter().enumerate() {
                    incoming[v] = inc[q].clone();
                    active[v] = act[q];
                }
                if stable {
                    break;
                }
            }
            // Origins spread along same-layer pushes.
            loop {
                let mut grew = false;
                for &v in list {
                    let Some(o) = out[v].clone() else { continue };
                    for (slot, _) in o {
                        if let Slot::Edge { to, .. } = t.vertices[v].slots[slot] {
                            if at.contains_key(&to) {
                                for o in origins[v].clone() {
                                    if !origins[to].contains(&o) {
                                        origins[to].push(o);
                                        grew = true;
                                    }
                                }
                            }
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            for &v in list {
                if !active[v] {
                    continue;
                }
                let o = out[v].clone().unwrap();
                let from = origins[v].clone();
                let outer: Vec<(usize, Move)> = o
                    .iter()
                    .copied()
                    .filter(|&(slot, _)| match t.vertices[v].slots[slot] {
                        Slot::Edge { to, .. } => t.vertices[to].layer != layer,
                        Slot::Boundary(_) => true,
                    })
                    .collect();
                deliver(v, &outer, &from, &mut incoming, &mut origins, &mut active, &mut support, &mut boundary_origins);
                let mut inc = incoming[v].clone();
                inc.sort_unstable();
                steps.push(PushStep {
                    vertex: v,
                    layer,
                    incoming: inc,
                    outgoing: o,
                });
            }
        }

        // Consistency of every step.
        for st in &steps {
            if st.outgoing.len() != self.half {
                return Err(Error::Unsupported(format!(
                    "vertex {} pushes along {} legs instead of {}",
                    st.vertex,
                    st.outgoing.len(),
                    self.half
                )));
            }
            if let Some(&(slot, _)) = st.outgoing.iter().find(|(s, _)| st.incoming.contains(s)) {
                return Err(Error::Unsupported(format!(
                    "vertex {} pushes back into slot {slot} it receives on",
                    st.vertex
                )));
            }
        }
        // No vertex may push into one that already pushed (acyclicity).
        let order: Vec<usize> = {
            let mut o = vec![usize::MAX; nv];
            for (i, st) in steps.iter().enumerate() {
                o[st.vertex] = i;
            }
            o
        };
        for st in &steps {
            for &(slot, _) in &st.outgoing {
                if let Slot::Edge { to, .. } = t.vertices[st.vertex].slots[slot] {
                    let same_layer = t.vertices[to].layer == st.layer;
                    if order[to] <= order[st.vertex] && !same_layer {
                        return Err(Error::Unsupported(format!("push from {} loops back to {to}", st.vertex)));
                    }
                }
            }
        }
        if has_sideways_cycle(t, &steps) {
            return Err(Error::Unsupported("sideways pushes form a cycle".into()));
        }

        support.sort_unstable();
        support.dedup();
        let mut allowed: Vec<usize> = targets.iter().flat_map(|&j| t.sector_boundary(j)).collect();
        allowed.sort_unstable();
        let contained = support.iter().all(|b| allowed.binary_search(b).is_ok());
        let per_sector = boundary_origins.iter().all(|(b, from)| {
            let (v, _) = t.boundary_order()[*b];
            from.iter().all(|&o| t.vertices[v].sector == Some(o))
        }) && steps.iter().all(|st| {
            st.vertex == 0 || origins[st.vertex].iter().all(|&o| t.vertices[st.vertex].sector == Some(o))
        });
        Ok(PushSchedule {
            targets: targets.to_vec(),
            steps,
            support,
            allowed,
            contained,
            per_sector,
        })
    }
}

fn has_sideways_cycle(t: &Tiling, steps: &[PushStep]) -> bool {
    let nv = t.vertex_count();
    let mut adj = vec![Vec::new(); nv];
    for st in steps {
        for &(slot, mv) in &st.outgoing {
            if mv == Move::Sideways {
                if let Slot::Edge { to, .. } = t.vertices[st.vertex].slots[slot] {
                    adj[st.vertex].push(to);
                }
            }
        }
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; nv];
    fn dfs(v: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &u in &adj[v] {
            if state[u] == 1 || (state[u] == 0 && dfs(u, adj, state)) {
                return true;
            }
        }
        state[v] = 2;
        false
    }
    (0..nv).any(|v| state[v] == 0 && dfs(v, &adj, &mut state))
}

fn cyclic_block(targets: &[usize], k: usize) -> bool {
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();
    let gaps = (0..sorted.len())
        .filter(|&i| {
            let a = sorted[i];
            let b = sorted[(i + 1) % sorted.len()];
            (b + k - a) % k != 1
        })
        .count();
    gaps <= 1
}

fn run_push(t: &Tiling, protocol: Protocol, targets: &[usize]) -> Result<PushSchedule> {
    let k = t.schlafli.k;
    let half = t.schlafli.half_legs();
    let mut targets = targets.to_vec();
    targets.sort_unstable();
    targets.dedup();
    if targets.len() != half || targets.iter().any(|&j| j == 0 || j > k) {
        return Err(Error::Input(format!("need {half} distinct target sectors in 1..={k}")));
    }
    if protocol == Protocol::CaseC && !cyclic_block(&targets, k) {
        return Err(Error::Unsupported("the {3,7} protocol needs cyclically contiguous target sectors".into()));
    }
    let mut pos = vec![0; t.vertex_count()];
    for list in &t.layer_lists {
        for (p, &v) in list.iter().enumerate() {
            pos[v] = p;
        }
    }
    let in_block = t
        .vertices
        .iter()
        .map(|v| v.sector.is_some_and(|j| targets.contains(&j)))
        .collect();
    Pusher {
        t,
        protocol,
        half,
        pos,
        in_block,
    }
    .run(&targets)
}

pub fn replacement_push(t: &Tiling, targets: &[usize]) -> Result<PushReport> {
    let protocol = protocol_for(t)?;
    if t.layers == 0 {
        return Err(Error::Input("pushing needs a tiling with at least one layer".into()));
    }
    let k = t.schlafli.k;
    let half = t.schlafli.half_legs();
    let schedule = run_push(t, protocol, targets)?;
    let covers: [Vec<usize>; 3] = [
        (1..=half).collect(),
        (2..=half + 1).collect(),
        (half + 1..=k).chain([1]).collect(),
    ];
    let nb = t.boundary_len();
    let region_of = |c: &[usize]| Region::from_sites(nb, c.iter().flat_map(|&j| t.sector_boundary(j)));
    let cover_regions = [region_of(&covers[0]), region_of(&covers[1]), region_of(&covers[2])];
    let triple = cover_regions[0].intersection(&cover_regions[1]).intersection(&cover_regions[2]);
    let cover_schedules = [
        run_push(t, protocol, &covers[0])?,
        run_push(t, protocol, &covers[1])?,
        run_push(t, protocol, &covers[2])?,
    ];
    Ok(PushReport {
        protocol,
        schedule,
        covers,
        cover_regions,
        cover_schedules,
        triple_intersection_empty: triple.is_empty(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub epsilon: f64,
    pub gap: f64,
    pub bound: f64,
    pub ok: bool,
}

pub const GAP_TOL: f64 = 1e-9;

/// Dense encoding isometry: column `x` is `Π X̄_i^{x_i}` applied to the
/// logical all-zero state.
pub fn encoding_isometry(code: &SubsystemCode) -> Result<DMatrix<C64>> {
    let n = code.n();
    if n > 12 {
        return Err(Error::Unsupported(format!("dense isometry on {n} qubits")));
    }
    if !code.is_exact() {
        return Err(Error::Unsupported("dense isometries need a code without gauge freedom".into()));
    }
    let m = code.bulk_count();
    let mut gens = code.stabilizers().rows().to_vec();
    gens.extend((0..m).map(|i| code.logical_z(i).clone()));
    let zero = dense::stabilizer_state(&gens);
    let mut v = DMatrix::zeros(1 << n, 1 << m);
    for x in 0..1usize << m {
        let mut psi = zero.clone();
        for i in 0..m {
            if x >> i & 1 == 1 {
                psi = dense::apply_pauli(code.logical_x(i), &psi);
            }
        }
        for (r, a) in psi.into_iter().enumerate() {
            v[(r, x)] = a;
        }
    }
    Ok(v)
}

/// Perturbation of the given shape with trace norm `epsilon`.
pub fn random_perturbation(rows: usize, cols: usize, epsilon: f64, rng: &mut impl Rng) -> DMatrix<C64> {
    let m = DMatrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let norm = dense::trace_norm(&m);
    m * C64::new(epsilon / norm, 0.0)
}

/// Bound the logical error of a Clifford layout on `V = V_0 + δV`.
pub fn approx_clifford_gap(code: &SubsystemCode, delta_v: &DMatrix<C64>, layout: &Layout) -> Result<GapReport> {
    let action = logical_action(code, &(0..code.bulk_count()).collect::<Vec<_>>(), layout)?;
    if action.kind == ActionKind::NotCsp {
        return Err(Error::Input("layout does not preserve the stabilizer group".into()));
    }
    let v0 = encoding_isometry(code)?;
    if delta_v.shape() != v0.shape() {
        return Err(Error::Input(format!(
            "perturbation is {:?}, isometry is {:?}",
            delta_v.shape(),
            v0.shape()
        )));
    }
    let u = layout.dense();
    let u_l = v0.adjoint() * &u * &v0;
    let v = &v0 + delta_v;
    let diff = v.adjoint() * &u * &v - u_l;
    let epsilon = dense::trace_norm(delta_v);
    let gap = dense::trace_norm(&diff);
    let bound = 2.0 * epsilon + epsilon * epsilon;
    Ok(GapReport {
        epsilon,
        gap,
        bound,
        ok: gap <= bound + GAP_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn gate_conjugation_rules() {
        let mut x = p("X");
        Gate::K(0).conjugate(&mut x);
        assert_eq!(x, p("Z"));
        Gate::K(0).conjugate(&mut x);
        assert_eq!(x, p("Y"));
        Gate::K(0).conjugate(&mut x);
        assert_eq!(x, p("X"));
        let mut y = p("Y");
        Gate::H(0).conjugate(&mut y);
        assert_eq!(y, p("-Y"));
        let mut xi = p("XI");
        Gate::Cx(0, 1).conjugate(&mut xi);
        assert_eq!(xi, p("XX"));
        let mut xz = p("XI");
        Gate::Cz(0, 1).conjugate(&mut xz);
        assert_eq!(xz, p("XZ"));
    }

    #[test]
    fn tableau_matches_dense_conjugation() {
        let layout = Layout::new(
            3,
            vec![Gate::H(0), Gate::Cx(0, 1), Gate::S(2), Gate::Cz(1, 2), Gate::K(1), Gate::Swap(0, 2), Gate::Y(1)],
        )
        .unwrap();
        let u = layout.dense();
        for s in ["XII", "IZI", "IIY", "-iXYZ", "ZZX"] {
            let q = p(s);
            let lhs = &u * dense::pauli_matrix(&q) * u.adjoint();
            let rhs = dense::pauli_matrix(&layout.tableau().conjugate(&q));
            assert!((lhs - rhs).norm() < 1e-10, "{s}");
        }
    }

    #[test]
    fn twenty_four_single_qubit_cliffords() {
        let t = single_qubit_cliffords();
        assert_eq!(t.len(), 24);
        assert!(t[0].word.is_empty());
        let k = clifford_index((Letter::Z, false), (Letter::Y, false)).unwrap();
        let ks = vec![k; 5];
        let via_table = conjugate_transversal(&ks, &p("XZYIX"));
        let via_gates = Layout::uniform(5, Gate::K).tableau().conjugate(&p("XZYIX"));
        assert_eq!(via_table, via_gates);
        assert_eq!(Layout::transversal(&ks).tableau(), Layout::uniform(5, Gate::K).tableau());
    }

    #[test]
    fn spread_examples() {
        let code = SubsystemCode::five_qubit();
        assert_eq!(spread_of(&Layout::uniform(5, Gate::H), &code).unwrap(), 0);
        assert_eq!(Layout::new(5, vec![Gate::Cx(1, 2)]).unwrap().spread(), 1);
        assert_eq!(Layout::new(12, vec![Gate::Swap(0, 5)]).unwrap().spread(), 5);
    }

    #[test]
    fn five_qubit_actions() {
        let code = SubsystemCode::five_qubit();
        let id = logical_action(&code, &[0], &Layout::identity(5)).unwrap();
        assert_eq!(id.kind, ActionKind::Identity);
        assert_eq!(classify_level(&id), Some(0));

        let k = logical_action(&code, &[0], &Layout::uniform(5, Gate::K)).unwrap();
        assert_eq!(k.kind, ActionKind::Clifford);
        assert_eq!(k.images[0], (p("Z"), p("Y")));
        assert_eq!(classify_level(&k), Some(2));

        let x = logical_action(&code, &[0], &Layout::uniform(5, Gate::X)).unwrap();
        assert_eq!(x.kind, ActionKind::Pauli);
        assert_eq!(x.images[0], (p("X"), p("-Z")));

        let h = logical_action(&code, &[0], &Layout::new(5, vec![Gate::H(0)]).unwrap()).unwrap();
        assert_eq!(h.kind, ActionKind::NotCsp);
        assert!(h.witness.is_some());
    }

    #[test]
    fn layout_text_round_trip() {
        let text = "# demo\nG H 0 1\nG CX 1,2\nG SWAP 0 2\n";
        let l = Layout::parse(text, 3).unwrap();
        assert_eq!(l.gates().len(), 4);
        assert_eq!(Layout::parse(&l.to_text(), 3).unwrap(), l);
        let err = Layout::parse("G H 0\nG CX 0 7\n", 3).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 8, .. }), "{err}");
        assert!(Layout::parse("G T 0\n", 3).is_err());
    }

    #[test]
    fn five_qubit_certificates() {
        let code = SubsystemCode::five_qubit();
        let parts = [
            Region::from_sites(5, [0, 1]),
            Region::from_sites(5, [2, 3]),
            Region::from_sites(5, [4]),
        ];
        let cert = py_certify(&code, &[0], &parts, 0, Variant::Dressed).unwrap().unwrap();
        assert_eq!(cert.level, 2);
        assert!(verify_certificate(&code, &cert).unwrap());
        let bad = [Region::from_sites(5, [0, 1, 2]), Region::from_sites(5, [3]), Region::from_sites(5, [4])];
        let fail = py_certify(&code, &[0], &bad, 0, Variant::Dressed).unwrap().unwrap_err();
        assert_eq!(fail.check.index, 0);
        assert!(py_certify(&code, &[0], &parts[..2], 0, Variant::Dressed).is_err());
    }

    #[test]
    fn split_sizes_respect_caps() {
        assert_eq!(split_sizes(3, 3, 2, 0), Some(vec![1, 2]));
        assert_eq!(split_sizes(12, 12, 2, 1), Some(vec![4, 8]));
        // d_c = 7: the bound allows s = 1 but whole sites do not fit.
        assert_eq!(split_sizes(7, 7, 2, 1), None);
        assert_eq!(split_sizes(7, 7, 2, 0), Some(vec![2, 5]));
        // A longer region leaves less room.
        assert_eq!(split_sizes(45, 33, 2, 4), None);
        assert_eq!(split_sizes(45, 33, 2, 3), Some(vec![19, 26]));
        for m in 2..=5 {
            if let Some(sz) = split_sizes(40, 40, m, 1) {
                assert_eq!(sz.iter().sum::<usize>(), 40);
            }
        }
    }

    #[test]
    fn five_qubit_theorem_report() {
        let code = SubsystemCode::five_qubit();
        let rep = theorem_report(&code, &[0], &TheoremConfig::default()).unwrap();
        assert_eq!(rep.d_c, Some(3));
        assert_eq!(rep.cr_witness.as_ref().map(Region::len), Some(3));
        assert!(rep.all_connected_cr);
        assert_eq!(rep.thresholds[0].max_spread, 0);
        assert!(rep.thresholds[0].certificate.is_some());
    }

    #[test]
    fn approx_gap_zero_perturbation() {
        let code = SubsystemCode::five_qubit();
        let z = DMatrix::zeros(32, 2);
        let r = approx_clifford_gap(&code, &z, &Layout::uniform(5, Gate::K)).unwrap();
        assert!(r.gap < 1e-12 && r.ok);
    }

    #[test]
    fn encoding_isometry_is_isometric() {
        let code = SubsystemCode::five_qubit();
        let v = encoding_isometry(&code).unwrap();
        let g = v.adjoint() * &v;
        assert!((g - DMatrix::<C64>::identity(2, 2)).norm() < 1e-10);
        let xl = v.adjoint() * dense::pauli_matrix(code.logical_x(0)) * &v;
        assert!((xl[(1, 0)] - C64::new(1.0, 0.0)).norm() < 1e-10);
    }
}
