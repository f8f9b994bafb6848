//! Independent brute-force oracles shared by the integration tests.
//!
//! Paulis are bitmask pairs and phases are dropped. Everything here
//! enumerates groups or the full Pauli group, so keep `n <= 7`.

#![allow(dead_code)]

use holowedge::hierarchy::{Gate, Layout};
use holowedge::{Pauli, SubsystemCode};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bits {
    pub x: u32,
    pub z: u32,
}

impl Bits {
    pub fn of(p: &Pauli) -> Bits {
        let mut b = Bits { x: 0, z: 0 };
        for i in 0..p.n() {
            b.x |= (p.x(i) as u32) << i;
            b.z |= (p.z(i) as u32) << i;
        }
        b
    }

    pub fn mul(self, o: Bits) -> Bits {
        Bits { x: self.x ^ o.x, z: self.z ^ o.z }
    }

    pub fn anticommutes(self, o: Bits) -> bool {
        ((self.x & o.z).count_ones() + (self.z & o.x).count_ones()) % 2 == 1
    }

    pub fn support(self) -> u32 {
        self.x | self.z
    }
}

/// Every element of the group generated by `gens`.
pub fn span(gens: &[Bits]) -> Vec<Bits> {
    let mut out = vec![Bits { x: 0, z: 0 }];
    for &g in gens {
        if out.contains(&g) {
            continue;
        }
        let more: Vec<Bits> = out.iter().map(|&e| e.mul(g)).collect();
        out.extend(more);
    }
    out
}

pub struct Oracle {
    pub n: usize,
    pub stabilizers: Vec<Bits>,
    /// Stabilizers plus the junk logicals.
    pub dressed: Vec<Bits>,
    pub logicals: Vec<Bits>,
    stab_group: Vec<Bits>,
    dressed_group: Vec<Bits>,
}

impl Oracle {
    pub fn new(code: &SubsystemCode, s: &[usize]) -> Oracle {
        let stabilizers: Vec<Bits> = code.stabilizers().rows().iter().map(Bits::of).collect();
        let mut dressed = stabilizers.clone();
        let mut logicals = Vec::new();
        for (i, (x, z)) in code.logicals().iter().enumerate() {
            let pair = [Bits::of(x), Bits::of(z)];
            if s.contains(&i) {
                logicals.extend(pair);
            } else {
                dressed.extend(pair);
            }
        }
        Oracle {
            n: code.n(),
            stab_group: span(&stabilizers),
            dressed_group: span(&dressed),
            stabilizers,
            dressed,
            logicals,
        }
    }

    fn cleanable(&self, group: &[Bits], region: u32) -> bool {
        self.logicals
            .iter()
            .all(|&l| group.iter().any(|&g| l.mul(g).support() & region == 0))
    }

    /// Paulis supported on `region` that commute with `gens`.
    fn centralizer_on(&self, gens: &[Bits], region: u32) -> impl Iterator<Item = Bits> + '_ {
        let gens = gens.to_vec();
        let full = 1u32 << self.n;
        (0..full)
            .filter(move |x| x & !region == 0)
            .flat_map(move |x| (0..full).filter(move |z| z & !region == 0).map(move |z| Bits { x, z }))
            .filter(move |p| gens.iter().all(|g| !p.anticommutes(*g)))
    }

    fn trivial_on(&self, gens: &[Bits], region: u32) -> bool {
        self.centralizer_on(gens, region)
            .all(|p| self.logicals.iter().all(|l| !p.anticommutes(*l)))
    }

    pub fn correctable(&self, region: u32) -> bool {
        self.cleanable(&self.stab_group, region)
    }

    pub fn pauli_dressed_cleanable(&self, region: u32) -> bool {
        self.cleanable(&self.dressed_group, region)
    }

    pub fn bare_trivial(&self, region: u32) -> bool {
        self.trivial_on(&self.dressed, region)
    }

    pub fn dressed_trivial(&self, region: u32) -> bool {
        self.trivial_on(&self.stabilizers, region)
    }
}

pub fn p(s: &str) -> Pauli {
    s.parse().unwrap()
}

pub fn mask_sites(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn random_layout(n: usize, gates: usize, rng: &mut impl Rng) -> Layout {
    let mut out = Vec::with_capacity(gates);
    for _ in 0..gates {
        let a = rng.gen_range(0..n);
        let g = match rng.gen_range(0..if n > 1 { 9 } else { 6 }) {
            0 => Gate::H(a),
            1 => Gate::S(a),
            2 => Gate::K(a),
            3 => Gate::X(a),
            4 => Gate::Y(a),
            5 => Gate::Z(a),
            k => {
                let b = (a + rng.gen_range(1..n)) % n;
                match k {
                    6 => Gate::Cx(a, b),
                    7 => Gate::Cz(a, b),
                    _ => Gate::Swap(a, b),
                }
            }
        };
        out.push(g);
    }
    Layout::new(n, out).unwrap()
}

/// Random encoding of `n - rank` logical qubits: a random Clifford applied
/// to `Z` on the first `rank` qubits.
pub fn random_code(n: usize, rank: usize, rng: &mut impl Rng) -> SubsystemCode {
    let layout = random_layout(n, 6 * n * n, rng);
    let t = layout.tableau();
    let stabs = (0..rank).map(|j| t.image_z(j).clone()).collect();
    let logicals = (rank..n).map(|j| (t.image_x(j).clone(), t.image_z(j).clone())).collect();
    SubsystemCode::new(n, stabs, logicals).unwrap()
}

/// Four qubits with stabilizers `XXXX`, `ZZZZ` and two logical qubits.
pub fn four_two_two() -> SubsystemCode {
    SubsystemCode::new(4, vec![p("XXXX"), p("ZZZZ")], vec![(p("XXII"), p("ZIZI")), (p("XIXI"), p("ZZII"))]).unwrap()
}

pub fn steane() -> SubsystemCode {
    let stabs = ["XXXXIII", "XXIIXXI", "XIXIXIX", "ZZZZIII", "ZZIIZZI", "ZIZIZIZ"];
    SubsystemCode::new(7, stabs.iter().map(|s| p(s)).collect(), vec![(p("XXXXXXX"), p("ZZZZZZZ"))]).unwrap()
}

/// Bacon–Shor stabilizers on four qubits plus a fifth qubit fixed by `Z`.
pub fn padded_gauge_code() -> SubsystemCode {
    SubsystemCode::new(
        5,
        vec![p("XXXXI"), p("ZZZZI"), p("IIIIZ")],
        vec![(p("XXIII"), p("ZIZII")), (p("XIXII"), p("ZZIII"))],
    )
    .unwrap()
}
