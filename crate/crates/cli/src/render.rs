//! Deterministic SVG pictures of flats and disc diagrams.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use anyhow::{bail, Result};
use tsq_core::flats::regions;
use tsq_core::{gs_geodesics, interval, CellKind, Document, TsComplex, VertexId};

const SCALE: f64 = 40.0;
const PAD: f64 = 20.0;
const BLUE: &str = "#7fa7e0";
const RED: &str = "#e07f7f";
const YELLOW: &str = "#f2d675";
const GREY: &str = "#c8c8c8";
const GS_CAP: usize = 16;

#[derive(Clone, Copy, Debug, Default)]
pub struct Overlays {
    pub interval: Option<(VertexId, VertexId)>,
    pub gs: Option<(VertexId, VertexId)>,
    pub regions: bool,
}

struct Layout {
    pos: BTreeMap<VertexId, (f64, f64)>,
    min: (f64, f64),
    size: (f64, f64),
}

impl Layout {
    fn new(pos: BTreeMap<VertexId, (f64, f64)>) -> Self {
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for &(x, y) in pos.values() {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        Layout { pos, min: lo, size: ((hi.0 - lo.0) * SCALE + 2.0 * PAD, (hi.1 - lo.1) * SCALE + 2.0 * PAD) }
    }

    /// Screen position; y grows downward.
    fn at(&self, v: VertexId) -> (f64, f64) {
        let (x, y) = self.pos[&v];
        ((x - self.min.0) * SCALE + PAD, self.size.1 - ((y - self.min.1) * SCALE + PAD))
    }

    fn points(&self, vs: &[VertexId]) -> String {
        let pts: Vec<String> = vs.iter().map(|&v| {
            let (x, y) = self.at(v);
            format!("{x:.2},{y:.2}")
        }).collect();
        pts.join(" ")
    }
}

/// Barycentric layout of a disc diagram: boundary on a circle, interior
/// vertices relaxed to the average of their neighbours.
fn tutte(k: &TsComplex, boundary: &[VertexId]) -> BTreeMap<VertexId, (f64, f64)> {
    let n = boundary.len().max(1) as f64;
    let r = n / std::f64::consts::TAU;
    let mut pos: BTreeMap<VertexId, (f64, f64)> = k.vertices().iter().map(|&v| (v, (0.0, 0.0))).collect();
    let fixed: BTreeSet<VertexId> = boundary.iter().copied().collect();
    for (i, &v) in boundary.iter().enumerate() {
        // Clockwise boundary, so walk the circle clockwise too.
        let a = -(i as f64) / n * std::f64::consts::TAU;
        pos.insert(v, (r * a.cos(), r * a.sin()));
    }
    for _ in 0..400 {
        for &v in k.vertices() {
            if fixed.contains(&v) {
                continue;
            }
            let nb: Vec<(f64, f64)> = k.out_darts(v).iter().map(|&d| pos[&k.head(d)]).collect();
            let m = nb.len() as f64;
            let c = nb.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / m, a.1 + p.1 / m));
            pos.insert(v, c);
        }
    }
    pos
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(doc: &Document, ov: &Overlays) -> Result<String> {
    let k = doc.complex()?;
    let coords = doc.coord_map();
    let layout = match (&coords, &doc.rotations) {
        (Some(c), _) => Layout::new(c.iter().map(|(&v, p)| (v, p.to_f64())).collect()),
        (None, Some(_)) => {
            let d = doc.diagram()?;
            Layout::new(tutte(&k, &d.boundary_vertices()))
        }
        (None, None) => bail!("no layout available: the document has neither coordinates nor rotations"),
    };
    // Blue for sides along multiples of π/3, red for the others.
    let tri_color = |c: &tsq_core::Cell| -> &'static str {
        let Some(cs) = &coords else { return GREY };
        let [a, b] = k.edge(c.boundary[0].edge).unwrap().ends;
        match (cs[&b] - cs[&a]).direction() {
            Some(d) if d % 2 == 0 => BLUE,
            Some(_) => RED,
            None => GREY,
        }
    };

    let mut s = String::new();
    let (w, h) = layout.size;
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#)?;
    writeln!(s, r#"<g id="cells" stroke="none">"#)?;
    for c in k.cells() {
        let fill = match c.kind {
            CellKind::Square => YELLOW,
            CellKind::Triangle => tri_color(c),
        };
        let kind = if c.kind == CellKind::Square { "square" } else { "triangle" };
        writeln!(s, r#"<polygon class="{kind}" data-cell="{}" fill="{fill}" points="{}"/>"#, c.id, layout.points(&k.cell_cycle(c)))?;
    }
    writeln!(s, "</g>")?;
    writeln!(s, r##"<g id="edges" stroke="#333333" stroke-width="1">"##)?;
    for e in k.edges() {
        let ((x1, y1), (x2, y2)) = (layout.at(e.ends[0]), layout.at(e.ends[1]));
        writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#)?;
    }
    writeln!(s, "</g>")?;

    if ov.regions {
        let f = doc.flat()?;
        let rd = regions(&f);
        writeln!(s, r##"<g id="regions" stroke="#000000" stroke-width="3">"##)?;
        for e in k.edges() {
            let rs: BTreeSet<usize> = k.cells_on_edge(e.id).iter().map(|(c, _)| rd.cell_region[c]).collect();
            if rs.len() > 1 {
                let ((x1, y1), (x2, y2)) = (layout.at(e.ends[0]), layout.at(e.ends[1]));
                writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#)?;
            }
        }
        for r in &rd.regions {
            let m = r.vertices.len() as f64;
            let (cx, cy) = r.vertices.iter().map(|&v| layout.at(v)).fold((0.0, 0.0), |a, p| (a.0 + p.0 / m, a.1 + p.1 / m));
            let class = if r.bounded { "region bounded" } else { "region" };
            writeln!(s, r#"<text class="{class}" x="{cx:.2}" y="{cy:.2}" font-size="12" text-anchor="middle" stroke="none">R{}</text>"#, r.id)?;
        }
        writeln!(s, "</g>")?;
    }

    if let Some((u, v)) = ov.interval {
        let iv = interval(&k, u, v)?;
        writeln!(s, r##"<g id="interval" fill="#404040" fill-opacity="0.25">"##)?;
        for c in iv.complex.cells() {
            writeln!(s, r#"<polygon points="{}"/>"#, layout.points(&iv.complex.cell_cycle(c)))?;
        }
        for &w in iv.labels.keys() {
            let (x, y) = layout.at(w);
            writeln!(s, r#"<circle class="interval" data-vertex="{w}" cx="{x:.2}" cy="{y:.2}" r="3" fill-opacity="1"/>"#)?;
        }
        writeln!(s, "</g>")?;
    }

    if let Some((u, v)) = ov.gs {
        let fam = gs_geodesics(&k, u, v, GS_CAP)?;
        writeln!(s, r##"<g id="gs" fill="none" stroke="#2b6e2b" stroke-width="2" stroke-opacity="0.6">"##)?;
        for p in &fam.paths {
            writeln!(s, r#"<polyline class="geodesic" points="{}"/>"#, layout.points(&p.vertices))?;
        }
        for &c in &fam.chain.vertices {
            let (x, y) = layout.at(c);
            writeln!(s, r##"<circle class="choke" data-vertex="{c}" cx="{x:.2}" cy="{y:.2}" r="4" fill="#2b6e2b"/>"##)?;
        }
        writeln!(s, "<title>{}</title>", escape(&format!("{} Gersten-Short geodesics from {u} to {v}", fam.count)))?;
        writeln!(s, "</g>")?;
    }
    writeln!(s, "</svg>")?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tsq_core::flats::gen_gaussian;

    #[test]
    fn gaussian_squares_are_yellow() {
        let f = gen_gaussian(2).unwrap();
        let svg = render(&Document::from_flat(&f), &Overlays::default()).unwrap();
        assert_eq!(svg.matches("class=\"square\"").count(), 16);
        assert_eq!(svg.matches(YELLOW).count(), 16);
    }
}
