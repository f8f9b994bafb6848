//! Deterministic SVG drawings of a tiling in the unit disk.
//!
//! Layer `t` sits at radius `tanh(t/2)` rescaled so the last layer stays
//! inside the boundary circle; each vertex's angle is the circular mean of
//! the boundary legs and children below it.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use holowedge::tiling::{Slot, VertexType};
use holowedge::Tiling;

const SIZE: f64 = 800.0;
const SCALE: f64 = 370.0;

pub struct Overlay {
    pub label: String,
    pub boundary: Vec<usize>,
    pub bulk: Vec<usize>,
    pub color: &'static str,
    pub hatch: bool,
}

fn xy(r: f64, theta: f64) -> (f64, f64) {
    (SIZE / 2.0 + SCALE * r * theta.cos(), SIZE / 2.0 - SCALE * r * theta.sin())
}

fn site_angle(i: usize, nb: usize) -> f64 {
    TAU * (i as f64 + 0.5) / nb as f64
}

fn positions(t: &Tiling) -> Vec<(f64, f64)> {
    let nb = t.boundary_len();
    let nv = t.vertex_count();
    let mut sum = vec![(0.0f64, 0.0f64); nv];
    let mut angle = vec![0.0f64; nv];
    for layer in (0..t.layer_lists.len()).rev() {
        for &v in &t.layer_lists[layer] {
            for slot in &t.vertices[v].slots {
                if let Slot::Boundary(i) = *slot {
                    let a = site_angle(i, nb);
                    sum[v].0 += a.cos();
                    sum[v].1 += a.sin();
                }
            }
            let (sx, sy) = sum[v];
            angle[v] = if sx.abs() + sy.abs() < 1e-12 {
                let list = &t.layer_lists[layer];
                let p = list.iter().position(|&u| u == v).unwrap();
                TAU * (p as f64 + 0.5) / list.len() as f64
            } else {
                sy.atan2(sx)
            };
            if let Some(parent) = t.vertices[v].parent {
                sum[parent].0 += angle[v].cos();
                sum[parent].1 += angle[v].sin();
            }
        }
    }
    let last = t.layers.max(1) as f64;
    let norm = 0.9 / (last / 2.0).tanh();
    (0..nv)
        .map(|v| {
            let layer = t.vertices[v].layer as f64;
            xy(norm * (layer / 2.0).tanh(), angle[v])
        })
        .collect()
}

fn kind_color(k: VertexType) -> &'static str {
    match k {
        VertexType::I => "#222222",
        VertexType::A => "#3465a4",
        VertexType::B => "#4e9a06",
        VertexType::C => "#ce5c00",
    }
}

/// A curved edge bowed slightly toward the centre.
fn arc(out: &mut String, a: (f64, f64), b: (f64, f64), attrs: &str) {
    let c = SIZE / 2.0;
    let mx = c + 0.92 * ((a.0 + b.0) / 2.0 - c);
    let my = c + 0.92 * ((a.1 + b.1) / 2.0 - c);
    writeln!(out, r#"<path d="M{:.2} {:.2} Q{mx:.2} {my:.2} {:.2} {:.2}" {attrs}/>"#, a.0, a.1, b.0, b.1).unwrap();
}

pub fn render(t: &Tiling, overlays: &[Overlay]) -> String {
    let pos = positions(t);
    let nb = t.boundary_len();
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    out.push_str("<defs>\n");
    for (j, o) in overlays.iter().enumerate() {
        if o.hatch {
            writeln!(
                out,
                r#"<pattern id="hatch{j}" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="6" stroke="{}" stroke-width="2"/></pattern>"#,
                o.color
            )
            .unwrap();
        }
    }
    out.push_str("</defs>\n");
    writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    let c = SIZE / 2.0;
    writeln!(out, r##"<circle cx="{c}" cy="{c}" r="{SCALE}" fill="none" stroke="#888888"/>"##).unwrap();

    // Overlays below the graph, in the given order.
    for (j, o) in overlays.iter().enumerate() {
        let fill = if o.hatch { format!("url(#hatch{j})") } else { o.color.to_string() };
        writeln!(out, r#"<g class="overlay" data-label="{}">"#, o.label).unwrap();
        for &v in &o.bulk {
            let (x, y) = pos[v];
            writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="11" fill="{fill}" fill-opacity="0.45"/>"#).unwrap();
        }
        for &i in &o.boundary {
            let a0 = TAU * i as f64 / nb as f64;
            let a1 = TAU * (i + 1) as f64 / nb as f64;
            let (x0, y0) = xy(1.0, a0);
            let (x1, y1) = xy(1.0, a1);
            writeln!(
                out,
                r#"<path d="M{x0:.2} {y0:.2} A{SCALE} {SCALE} 0 0 0 {x1:.2} {y1:.2}" fill="none" stroke="{}" stroke-width="7" stroke-opacity="0.6"/>"#,
                o.color
            )
            .unwrap();
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g class=\"edges\">\n");
    for (a, b) in t.edges() {
        arc(&mut out, pos[a], pos[b], r##"fill="none" stroke="#555555" stroke-width="1""##);
    }
    for (i, &(v, _)) in t.boundary_order().iter().enumerate() {
        arc(&mut out, pos[v], xy(1.0, site_angle(i, nb)), r##"fill="none" stroke="#aaaaaa" stroke-width="0.6""##);
    }
    out.push_str("</g>\n<g class=\"vertices\">\n");
    for (v, &(x, y)) in pos.iter().enumerate() {
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{}"/>"#, kind_color(t.vertices[v].kind)).unwrap();
    }
    for i in 0..nb {
        let (x, y) = xy(1.0, site_angle(i, nb));
        writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="1.6" fill="#000000"/>"##).unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    out
}
