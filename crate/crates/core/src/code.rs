//! Stabilizer subsystem codes with one logical qubit per bulk site.
//!
//! Which bulk sites count as the logical subsystem and which as junk is
//! chosen per query (see [`crate::regions`]); the code itself just stores
//! stabilizers and a logical `(X̄, Z̄)` pair per bulk site.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::symplectic::{canonicalize_n, Pauli, PauliBasis};
use crate::tiling::{parse_tiling_header, Schlafli, Tiling};

/// Tiling a code was contracted from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Geometry {
    pub schlafli: Schlafli,
    pub layers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemCode {
    n: usize,
    stabilizers: PauliBasis,
    logicals: Vec<(Pauli, Pauli)>,
    /// Label of each boundary qubit, in cyclic order (e.g. `"12:3"`).
    pub boundary_labels: Vec<String>,
    pub geometry: Option<Geometry>,
    /// Adjacency between bulk sites, when known.
    bulk_graph: Option<Vec<Vec<usize>>>,
}

impl SubsystemCode {
    /// Validates the stabilizer group and logical pairs.
    pub fn new(n: usize, stabilizers: Vec<Pauli>, logicals: Vec<(Pauli, Pauli)>) -> Result<Self> {
        for p in stabilizers.iter().chain(logicals.iter().flat_map(|(x, z)| [x, z])) {
            if p.n() != n {
                return Err(Error::LengthMismatch(n, p.n()));
            }
            if !p.is_hermitian() {
                return Err(Error::Input(format!("operator {p} is not Hermitian")));
            }
        }
        let basis = canonicalize_n(n, stabilizers.clone());
        if !basis.is_abelian() {
            return Err(Error::Input("stabilizer generators do not commute".into()));
        }
        for g in &stabilizers {
            let m = basis.member(g).expect("generator lies in its own span");
            if !m.phase_match {
                return Err(Error::Input(format!(
                    "stabilizer generators produce -I (generator {g} conflicts with the others)"
                )));
            }
        }
        for (i, (x, z)) in logicals.iter().enumerate() {
            if !x.anticommutes_with(z) {
                return Err(Error::Input(format!("logical X and Z of bulk site {i} commute")));
            }
            for g in basis.rows() {
                if g.anticommutes_with(x) || g.anticommutes_with(z) {
                    return Err(Error::Input(format!(
                        "logical operators of bulk site {i} do not commute with stabilizer {g}"
                    )));
                }
            }
            for (j, (x2, z2)) in logicals.iter().enumerate().skip(i + 1) {
                if [x2, z2].iter().any(|q| q.anticommutes_with(x) || q.anticommutes_with(z)) {
                    return Err(Error::Input(format!(
                        "logical operators of bulk sites {i} and {j} do not commute"
                    )));
                }
            }
        }
        Ok(SubsystemCode {
            n,
            stabilizers: basis,
            logicals,
            boundary_labels: (0..n).map(|i| i.to_string()).collect(),
            geometry: None,
            bulk_graph: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bulk_count(&self) -> usize {
        self.logicals.len()
    }

    pub fn stabilizers(&self) -> &PauliBasis {
        &self.stabilizers
    }

    pub fn logicals(&self) -> &[(Pauli, Pauli)] {
        &self.logicals
    }

    pub fn logical_x(&self, i: usize) -> &Pauli {
        &self.logicals[i].0
    }

    pub fn logical_z(&self, i: usize) -> &Pauli {
        &self.logicals[i].1
    }

    /// `rank(S) + bulk = n`.
    pub fn is_exact(&self) -> bool {
        self.stabilizers.rank() + self.bulk_count() == self.n
    }

    pub fn with_bulk_graph(mut self, adjacency: Vec<Vec<usize>>) -> Self {
        assert_eq!(adjacency.len(), self.bulk_count());
        self.bulk_graph = Some(adjacency);
        self
    }

    pub fn bulk_graph(&self) -> Option<&[Vec<usize>]> {
        self.bulk_graph.as_deref()
    }

    /// Graph distances between bulk sites; a single site needs no graph.
    pub fn bulk_distances(&self) -> Option<Vec<Vec<usize>>> {
        let m = self.bulk_count();
        let Some(adj) = &self.bulk_graph else {
            return (m <= 1).then(|| vec![vec![0; m]; m]);
        };
        let mut out = Vec::with_capacity(m);
        for s in 0..m {
            let mut dist = vec![usize::MAX; m];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                    }
                }
            }
            out.push(dist);
        }
        Some(out)
    }

    /// Regenerate the tiling this code came from.
    pub fn tiling(&self) -> Option<Tiling> {
        let g = self.geometry?;
        Tiling::generate(g.schlafli, g.layers).ok()
    }

    /// The `[[5,1,3]]` code.
    pub fn five_qubit() -> Self {
        let s = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"];
        let stabs = s.iter().map(|p| p.parse().unwrap()).collect();
        let lx = "XXXXX".parse().unwrap();
        let lz = "ZZZZZ".parse().unwrap();
        SubsystemCode::new(5, stabs, vec![(lx, lz)]).unwrap()
    }

    /// Bacon–Shor code on a 2×2 grid (qubits `0 1 / 2 3`): bulk site 0 is
    /// the logical qubit, bulk site 1 the gauge qubit.
    pub fn bacon_shor_2x2() -> Self {
        let p = |s: &str| -> Pauli { s.parse().unwrap() };
        SubsystemCode::new(
            4,
            vec![p("XXXX"), p("ZZZZ")],
            vec![(p("XXII"), p("ZIZI")), (p("XIXI"), p("ZZII"))],
        )
        .unwrap()
    }

    /// Serialize in the `QECC` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "QECC n={} bulk={}", self.n, self.bulk_count()).unwrap();
        if let Some(g) = self.geometry {
            writeln!(out, "GEOMETRY n={} k={} layers={}", g.schlafli.n, g.schlafli.k, g.layers).unwrap();
        }
        writeln!(out, "BOUNDARY {}", self.boundary_labels.join(" ")).unwrap();
        for s in self.stabilizers.rows() {
            writeln!(out, "S {s}").unwrap();
        }
        for (i, (x, z)) in self.logicals.iter().enumerate() {
            writeln!(out, "LX {i} {x}").unwrap();
            writeln!(out, "LZ {i} {z}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut header = None;
        let mut geometry = None;
        let mut labels = None;
        let mut stabs = Vec::new();
        let mut lx: Vec<Option<Pauli>> = Vec::new();
        let mut lz: Vec<Option<Pauli>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let indent = raw.len() - raw.trim_start().len();
            let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest_col = indent + tag.len() + 2;
            let parse_pauli = |s: &str, col: usize, n: usize| -> Result<Pauli> {
                let p: Pauli = s.parse().map_err(|e| match e {
                    Error::Parse { column, message, .. } => Error::parse(line_no, col + column - 1, message),
                    other => other,
                })?;
                if p.n() != n {
                    return Err(Error::parse(
                        line_no,
                        col,
                        format!("Pauli string has {} sites, expected {n}", p.n()),
                    ));
                }
                Ok(p)
            };
            match tag {
                "QECC" => {
                    if header.is_some() {
                        return Err(Error::parse(line_no, 1, "duplicate QECC header"));
                    }
                    let mut n = None;
                    let mut m = None;
                    for f in rest.split_whitespace() {
                        let col = indent + line.find(f).unwrap_or(0) + 1;
                        let (key, val) = f
                            .split_once('=')
                            .ok_or_else(|| Error::parse(line_no, col, format!("expected key=value, found {f:?}")))?;
                        let v: usize = val
                            .parse()
                            .map_err(|_| Error::parse(line_no, col, format!("expected integer, found {val:?}")))?;
                        match key {
                            "n" => n = Some(v),
                            "bulk" => m = Some(v),
                            _ => return Err(Error::parse(line_no, col, format!("unknown field {key:?}"))),
                        }
                    }
                    let (Some(n), Some(m)) = (n, m) else {
                        return Err(Error::parse(line_no, 1, "QECC header needs n= and bulk="));
                    };
                    header = Some((n, m));
                    lx = vec![None; m];
                    lz = vec![None; m];
                }
                "GEOMETRY" => {
                    let (n, k, layers) = parse_tiling_header(line, line_no)?;
                    let (schlafli, _) = Schlafli::validate(n, k)?;
                    geometry = Some(Geometry { schlafli, layers });
                }
                _ => {
                    let Some((n, m)) = header else {
                        return Err(Error::parse(line_no, 1, "expected QECC header first"));
                    };
                    match tag {
                        "BOUNDARY" => {
                            let l: Vec<String> = rest.split_whitespace().map(String::from).collect();
                            if l.len() != n {
                                return Err(Error::parse(
                                    line_no,
                                    rest_col,
                                    format!("BOUNDARY lists {} sites, expected {n}", l.len()),
                                ));
                            }
                            labels = Some(l);
                        }
                        "S" => stabs.push(parse_pauli(rest.trim(), rest_col, n)?),
                        "LX" | "LZ" => {
                            let (site, p) = rest
                                .trim()
                                .split_once(char::is_whitespace)
                                .ok_or_else(|| Error::parse(line_no, rest_col, "expected `<site> <pauli>`"))?;
                            let site: usize = site
                                .parse()
                                .map_err(|_| Error::parse(line_no, rest_col, format!("bad bulk site {site:?}")))?;
                            if site >= m {
                                return Err(Error::parse(
                                    line_no,
                                    rest_col,
                                    format!("bulk site {site} out of range for {m} sites"),
                                ));
                            }
                            let col = rest_col + line[tag.len()..].trim_start().find(p.trim()).unwrap_or(0);
                            let p = parse_pauli(p.trim(), col, n)?;
                            let slot = if tag == "LX" { &mut lx[site] } else { &mut lz[site] };
                            if slot.is_some() {
                                return Err(Error::parse(line_no, 1, format!("duplicate {tag} for site {site}")));
                            }
                            *slot = Some(p);
                        }
                        _ => return Err(Error::parse(line_no, 1, format!("unknown record {tag:?}"))),
                    }
                }
            }
        }
        let Some((n, _)) = header else {
            return Err(Error::parse(1, 1, "missing QECC header"));
        };
        let mut logicals = Vec::new();
        for (i, (x, z)) in lx.into_iter().zip(lz).enumerate() {
            match (x, z) {
                (Some(x), Some(z)) => logicals.push((x, z)),
                _ => return Err(Error::Input(format!("bulk site {i} needs both LX and LZ"))),
            }
        }
        let mut code = SubsystemCode::new(n, stabs, logicals)?;
        if let Some(l) = labels {
            code.boundary_labels = l;
        }
        if let Some(g) = geometry {
            let t = Tiling::generate(g.schlafli, g.layers)?;
            if t.vertex_count() != code.bulk_count() || t.boundary_len() != n {
                return Err(Error::Input("GEOMETRY does not match the code's size".into()));
            }
            code.geometry = Some(g);
            code.bulk_graph = Some(tiling_adjacency(&t));
        }
        Ok(code)
    }
}

pub(crate) fn tiling_adjacency(t: &Tiling) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); t.vertex_count()];
    for (a, b) in t.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}
