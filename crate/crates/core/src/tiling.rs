//! Layered `{n,k}` hyperbolic tilings in the vertex convention.
//!
//! Layer 0 is a single `i` vertex. Each further layer is produced by rewriting
//! every vertex of the previous layer, in cyclic order, with
//!
//! ```text
//! i -> (b a^{n-3})^k
//! n > 3:  a -> a^{n-4} b (a^{n-3} b)^{k-3}      b -> a^{n-4} b (a^{n-3} b)^{k-4}
//! n = 3:  a -> c b^{k-4}   b -> c b^{k-5}   c -> c b^{k-6}
//! ```
//!
//! New `b`/`c` vertices are wired to the vertex that emitted them, and each
//! `c` is also wired to the emitting vertex's left neighbour. Consecutive
//! vertices of a layer are wired in a cycle.
//!
//! Every vertex keeps its planar legs ("slots") in counterclockwise order:
//! parents first, then the previous same-layer neighbour, the children in
//! layer order, and the next same-layer neighbour. Children slots of the
//! outermost layer are left dangling and become the boundary.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Schlafli {
    pub n: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// `k = 3`: the network does not define an isometry.
    NotIsometry,
    /// Even `k`: no tensor with one bulk leg and an odd number of planar
    /// legs fits the vertex.
    EvenDegree,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NotIsometry => f.write_str("k = 3: the tensor network is not an isometry"),
            Warning::EvenDegree => {
                f.write_str("k is even: no single-bulk-leg perfect tensor fits the vertex degree")
            }
        }
    }
}

impl Schlafli {
    /// Accept strictly hyperbolic pairs, `1/n + 1/k < 1/2`.
    pub fn validate(n: usize, k: usize) -> Result<(Schlafli, Vec<Warning>)> {
        let reject = |reason: String| Err(Error::InvalidSchlafli { n, k, reason });
        if n < 3 || k < 3 {
            return reject("n and k must both be at least 3".into());
        }
        // 1/n + 1/k < 1/2  <=>  (n-2)(k-2) > 4
        let lhs = (n - 2) * (k - 2);
        if lhs < 4 {
            return reject(format!("1/{n} + 1/{k} > 1/2: spherical tiling"));
        }
        if lhs == 4 {
            return reject(format!("1/{n} + 1/{k} = 1/2: flat tiling, strict hyperbolicity required"));
        }
        let mut warnings = Vec::new();
        if k == 3 {
            warnings.push(Warning::NotIsometry);
        }
        if k % 2 == 0 {
            warnings.push(Warning::EvenDegree);
        }
        Ok((Schlafli { n, k }, warnings))
    }

    /// Number of tensor legs paired with the centre in a perfect tensor:
    /// `k = 2N - 1`.
    pub fn half_legs(&self) -> usize {
        self.k.div_ceil(2)
    }
}

pub fn validate_schlafli(n: usize, k: usize) -> Result<(Schlafli, Vec<Warning>)> {
    Schlafli::validate(n, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexType {
    I,
    A,
    B,
    C,
}

impl VertexType {
    pub fn as_char(self) -> char {
        match self {
            VertexType::I => 'i',
            VertexType::A => 'a',
            VertexType::B => 'b',
            VertexType::C => 'c',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'i' => VertexType::I,
            'a' => VertexType::A,
            'b' => VertexType::B,
            'c' => VertexType::C,
            _ => return None,
        })
    }
}

/// One planar leg of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    /// Wired to `slot` of vertex `to`.
    Edge { to: usize, slot: usize },
    /// Dangling; position in the boundary order.
    Boundary(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub kind: VertexType,
    pub layer: usize,
    /// Sector `1..=k`; `None` for the centre.
    pub sector: Option<usize>,
    /// The vertex whose replacement emitted this one.
    pub parent: Option<usize>,
    /// Second parent of a `c` vertex.
    pub left_parent: Option<usize>,
    pub slots: Vec<Slot>,
}

/// Role of a slot relative to its vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotRole {
    Parent,
    LeftParent,
    Prev,
    /// Child number `index` in layer order (dangling or wired).
    Child(usize),
    Next,
    /// Leg of the centre towards `b_{index+1}` (or the `index`-th dangling leg).
    Centre(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    pub schlafli: Schlafli,
    pub layers: usize,
    pub vertices: Vec<Vertex>,
    /// Vertex ids per layer, in cyclic counterclockwise order.
    pub layer_lists: Vec<Vec<usize>>,
    /// `(vertex, slot)` for every dangling leg, in boundary order.
    pub boundary: Vec<(usize, usize)>,
    roles: Vec<Vec<SlotRole>>,
}

/// The string produced by rewriting one vertex.
pub fn replacement(s: Schlafli, kind: VertexType) -> Vec<VertexType> {
    use VertexType::*;
    let Schlafli { n, k } = s;
    let mut out = Vec::new();
    let rep = |out: &mut Vec<VertexType>, t: VertexType, m: usize| out.extend(std::iter::repeat(t).take(m));
    match (kind, n) {
        (I, _) => {
            for _ in 0..k {
                out.push(B);
                rep(&mut out, A, n - 3);
            }
        }
        (A, 3) => {
            out.push(C);
            rep(&mut out, B, k - 4);
        }
        (B, 3) => {
            out.push(C);
            rep(&mut out, B, k - 5);
        }
        (C, 3) => {
            out.push(C);
            rep(&mut out, B, k - 6);
        }
        (A, _) | (B, _) => {
            let tail = if kind == A { k - 3 } else { k - 4 };
            rep(&mut out, A, n - 4);
            out.push(B);
            for _ in 0..tail {
                rep(&mut out, A, n - 3);
                out.push(B);
            }
        }
        (C, _) => unreachable!("c vertices only occur for n = 3"),
    }
    out
}

/// Vertex-type census `[i, a, b, c]` of each layer, computed from the
/// replacement rules without building the graph.
pub fn symbolic_census(s: Schlafli, layers: usize) -> Vec<[usize; 4]> {
    use VertexType::*;
    let idx = |t: VertexType| match t {
        I => 0,
        A => 1,
        B => 2,
        C => 3,
    };
    let mut out = vec![[1, 0, 0, 0]];
    for _ in 0..layers {
        let prev = *out.last().unwrap();
        let mut next = [0usize; 4];
        for t in [I, A, B, C] {
            if prev[idx(t)] == 0 {
                continue;
            }
            let mut per = [0usize; 4];
            for c in replacement(s, t) {
                per[idx(c)] += 1;
            }
            for j in 0..4 {
                next[j] += prev[idx(t)] * per[j];
            }
        }
        out.push(next);
    }
    out
}

fn check_rules(s: Schlafli, layers: usize) -> Result<()> {
    let Schlafli { n, k } = s;
    let need = |ok: bool, reason: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSchlafli { n, k, reason: reason.into() })
        }
    };
    if layers >= 2 {
        if n == 3 {
            need(k >= 6, "replacement rule c -> c b^{k-6} needs k >= 6")?;
        } else {
            need(k >= 4, "replacement rule for b needs k >= 4")?;
        }
    }
    Ok(())
}

impl Tiling {
    pub fn generate(s: Schlafli, layers: usize) -> Result<Tiling> {
        Schlafli::validate(s.n, s.k)?;
        check_rules(s, layers)?;
        let k = s.k;

        struct Proto {
            kind: VertexType,
            layer: usize,
            sector: Option<usize>,
            parent: Option<usize>,
            left_parent: Option<usize>,
            /// Children wired to this vertex, in layer order.
            children: Vec<usize>,
        }
        let mut protos = vec![Proto {
            kind: VertexType::I,
            layer: 0,
            sector: None,
            parent: None,
            left_parent: None,
            children: Vec::new(),
        }];
        let mut layer_lists = vec![vec![0usize]];

        for t in 0..layers {
            let prev = layer_lists[t].clone();
            let mut next = Vec::new();
            for (pos, &v) in prev.iter().enumerate() {
                let left = prev[(pos + prev.len() - 1) % prev.len()];
                let kind = protos[v].kind;
                let string = replacement(s, kind);
                // Sector of the first-layer vertices follows the `b` blocks.
                let mut sector = protos[v].sector;
                for child_kind in string {
                    if kind == VertexType::I && child_kind == VertexType::B {
                        sector = Some(sector.map_or(1, |j| j + 1));
                    }
                    let id = protos.len();
                    let wired = child_kind != VertexType::A;
                    let is_c = child_kind == VertexType::C;
                    protos.push(Proto {
                        kind: child_kind,
                        layer: t + 1,
                        sector,
                        parent: wired.then_some(v),
                        left_parent: is_c.then_some(left),
                        children: Vec::new(),
                    });
                    next.push(id);
                    if wired {
                        protos[v].children.push(id);
                    }
                }
            }
            // A `c` is the last child of its left parent (it sits right of all
            // that parent's own emissions).
            for &id in &next {
                if let Some(lp) = protos[id].left_parent {
                    protos[lp].children.push(id);
                }
            }
            layer_lists.push(next);
        }

        // Assemble slot lists with provisional targets.
        enum Target {
            Vertex(usize),
            Dangling,
        }
        let mut targets: Vec<Vec<Target>> = Vec::with_capacity(protos.len());
        let mut roles: Vec<Vec<SlotRole>> = Vec::with_capacity(protos.len());
        let mut pos_in_layer = vec![0usize; protos.len()];
        for list in &layer_lists {
            for (p, &v) in list.iter().enumerate() {
                pos_in_layer[v] = p;
            }
        }
        for (v, proto) in protos.iter().enumerate() {
            let mut tg = Vec::new();
            let mut rl = Vec::new();
            if proto.kind == VertexType::I {
                if layers == 0 {
                    for j in 0..k {
                        tg.push(Target::Dangling);
                        rl.push(SlotRole::Centre(j));
                    }
                } else {
                    for (j, &c) in proto.children.iter().enumerate() {
                        tg.push(Target::Vertex(c));
                        rl.push(SlotRole::Centre(j));
                    }
                }
            } else {
                let list = &layer_lists[proto.layer];
                let p = pos_in_layer[v];
                let prev = list[(p + list.len() - 1) % list.len()];
                let next = list[(p + 1) % list.len()];
                if let Some(par) = proto.parent {
                    tg.push(Target::Vertex(par));
                    rl.push(SlotRole::Parent);
                }
                if let Some(lp) = proto.left_parent {
                    tg.push(Target::Vertex(lp));
                    rl.push(SlotRole::LeftParent);
                }
                tg.push(Target::Vertex(prev));
                rl.push(SlotRole::Prev);
                let wired = proto.parent.iter().count() + proto.left_parent.iter().count() + 2;
                let child_slots = k - wired;
                if proto.layer == layers {
                    for c in 0..child_slots {
                        tg.push(Target::Dangling);
                        rl.push(SlotRole::Child(c));
                    }
                } else {
                    debug_assert_eq!(proto.children.len(), child_slots);
                    for (c, &ch) in proto.children.iter().enumerate() {
                        tg.push(Target::Vertex(ch));
                        rl.push(SlotRole::Child(c));
                    }
                }
                tg.push(Target::Vertex(next));
                rl.push(SlotRole::Next);
            }
            targets.push(tg);
            roles.push(rl);
        }

        // Boundary order: outermost layer in order, dangling slots in slot order.
        let mut boundary = Vec::new();
        let mut slots: Vec<Vec<Slot>> = targets
            .iter()
            .map(|tg| vec![Slot::Boundary(usize::MAX); tg.len()])
            .collect();
        for &v in &layer_lists[layers] {
            for (j, t) in targets[v].iter().enumerate() {
                if matches!(t, Target::Dangling) {
                    slots[v][j] = Slot::Boundary(boundary.len());
                    boundary.push((v, j));
                }
            }
        }
        for v in 0..targets.len() {
            for (j, t) in targets[v].iter().enumerate() {
                if let Target::Vertex(u) = *t {
                    let back = targets[u]
                        .iter()
                        .position(|x| matches!(x, Target::Vertex(w) if *w == v))
                        .expect("edges are symmetric");
                    debug_assert_eq!(
                        targets[u].iter().filter(|x| matches!(x, Target::Vertex(w) if *w == v)).count(),
                        1,
                        "tiling graph has a multi-edge"
                    );
                    slots[v][j] = Slot::Edge { to: u, slot: back };
                }
            }
        }

        let vertices = protos
            .into_iter()
            .zip(slots)
            .enumerate()
            .map(|(id, (p, slots))| Vertex {
                id,
                kind: p.kind,
                layer: p.layer,
                sector: p.sector,
                parent: p.parent,
                left_parent: p.left_parent,
                slots,
            })
            .collect();

        Ok(Tiling {
            schlafli: s,
            layers,
            vertices,
            layer_lists,
            boundary,
            roles,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary_order(&self) -> &[(usize, usize)] {
        &self.boundary
    }

    pub fn role(&self, v: usize, slot: usize) -> SlotRole {
        self.roles[v][slot]
    }

    pub fn roles(&self, v: usize) -> &[SlotRole] {
        &self.roles[v]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in &self.vertices {
            for s in &v.slots {
                if let Slot::Edge { to, .. } = *s {
                    if v.id < to {
                        out.push((v.id, to));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Wired degree of a vertex (dangling legs not counted).
    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v]
            .slots
            .iter()
            .filter(|s| matches!(s, Slot::Edge { .. }))
            .count()
    }

    pub fn census(&self, layer: usize) -> [usize; 4] {
        let mut c = [0usize; 4];
        for &v in &self.layer_lists[layer] {
            c[self.vertices[v].kind as usize] += 1;
        }
        c
    }

    /// Type string of one layer, e.g. `"babababababa"`.
    pub fn layer_string(&self, layer: usize) -> String {
        self.layer_lists[layer]
            .iter()
            .map(|&v| self.vertices[v].kind.as_char())
            .collect()
    }

    /// Sectors `M_1..M_k` as vertex lists (layer by layer, in layer order).
    pub fn sectors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.schlafli.k];
        for list in &self.layer_lists[1.min(self.layers + 1)..] {
            for &v in list {
                if let Some(j) = self.vertices[v].sector {
                    out[j - 1].push(v);
                }
            }
        }
        out
    }

    pub fn sector_of(&self, v: usize) -> Option<usize> {
        self.vertices[v].sector
    }

    /// Boundary positions whose leg belongs to a vertex of sector `j`.
    pub fn sector_boundary(&self, j: usize) -> Vec<usize> {
        self.boundary
            .iter()
            .enumerate()
            .filter(|(_, &(v, _))| self.vertices[v].sector == Some(j))
            .map(|(i, _)| i)
            .collect()
    }

    /// Shortest-path distances from `u` to every vertex.
    pub fn distances_from(&self, u: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        dist[u] = 0;
        queue.push_back(u);
        while let Some(v) = queue.pop_front() {
            for s in &self.vertices[v].slots {
                if let Slot::Edge { to, .. } = *s {
                    if dist[to] == usize::MAX {
                        dist[to] = dist[v] + 1;
                        queue.push_back(to);
                    }
                }
            }
        }
        dist
    }

    pub fn bulk_distance(&self, u: usize, v: usize) -> usize {
        self.distances_from(u)[v]
    }

    /// Serialize in the `TILING` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let Schlafli { n, k } = self.schlafli;
        writeln!(out, "TILING n={n} k={k} layers={}", self.layers).unwrap();
        for v in &self.vertices {
            writeln!(out, "V {} {} {}", v.id, v.kind.as_char(), v.layer).unwrap();
        }
        for (a, b) in self.edges() {
            writeln!(out, "E {a} {b}").unwrap();
        }
        out.push_str("BOUNDARY");
        for &(v, s) in &self.boundary {
            // Tensor leg numbering: leg 0 is the bulk leg.
            write!(out, " {}:{}", v, s + 1).unwrap();
        }
        out.push('\n');
        out
    }

    /// Parse the `TILING` text format. The header determines the tiling; the
    /// remaining lines are checked against the regenerated structure.
    pub fn from_text(text: &str) -> Result<Tiling> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "empty tiling file"))?;
        let (n, k, layers) = parse_tiling_header(header, hline)?;
        let (s, _) = Schlafli::validate(n, k)?;
        let tiling = Tiling::generate(s, layers)?;
        let expected = tiling.to_text();
        let mut exp_lines = expected.lines().skip(1);
        for (line_no, line) in lines {
            let want = exp_lines.next();
            if want.map(str::trim) != Some(normalize_ws(line).as_str()) {
                let col = match want {
                    Some(w) => first_difference(w, &normalize_ws(line)) + 1,
                    None => 1,
                };
                return Err(Error::parse(
                    line_no,
                    col,
                    match want {
                        Some(w) => format!("line disagrees with generated tiling; expected `{}`", truncate(w)),
                        None => "unexpected extra line".to_string(),
                    },
                ));
            }
        }
        if let Some(w) = exp_lines.next() {
            return Err(Error::parse(
                text.lines().count() + 1,
                1,
                format!("tiling file ends early; expected `{}`", truncate(w)),
            ));
        }
        Ok(tiling)
    }
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn first_difference(a: &str, b: &str) -> usize {
    a.chars().zip(b.chars()).take_while(|(x, y)| x == y).count()
}

fn truncate(s: &str) -> String {
    if s.len() > 60 {
        format!("{}...", &s[..60])
    } else {
        s.to_string()
    }
}

/// Parse `TILING n=<n> k=<k> layers=<L>`; also used by code files.
pub(crate) fn parse_tiling_header(line: &str, line_no: usize) -> Result<(usize, usize, usize)> {
    let mut fields = line.split_whitespace();
    let tag = fields.next().unwrap_or("");
    if tag != "TILING" && tag != "GEOMETRY" {
        return Err(Error::parse(line_no, 1, format!("expected TILING header, found {tag:?}")));
    }
    let mut n = None;
    let mut k = None;
    let mut layers = None;
    let mut col = tag.len() + 2;
    for f in fields {
        let (key, val) = f
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, col, format!("expected key=value, found {f:?}")))?;
        let v: usize = val
            .parse()
            .map_err(|_| Error::parse(line_no, col + key.len() + 1, format!("expected integer, found {val:?}")))?;
        match key {
            "n" => n = Some(v),
            "k" => k = Some(v),
            "layers" => layers = Some(v),
            _ => return Err(Error::parse(line_no, col, format!("unknown field {key:?}"))),
        }
        col += f.len() + 1;
    }
    match (n, k, layers) {
        (Some(n), Some(k), Some(l)) => Ok((n, k, l)),
        _ => Err(Error::parse(line_no, 1, "header needs n=, k= and layers=")),
    }
}
