//! Basic moves as local rewriting rules on edge paths, and straightening.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::complex::{CellId, CellKind, Dart, TsComplex, VertexId};
use crate::error::{Result, TsqError};
use crate::metric::{distance, enumerate_geodesics};
use crate::path::PathSeq;

/// Longest square strip followed when matching triangle-square-triangle moves.
pub const DEFAULT_STRIP_BOUND: usize = 64;
pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MoveKind {
    Trivial,
    Triangle,
    Square,
    TriangleTriangle,
    TriangleSquareTriangle { squares: usize },
}

impl MoveKind {
    fn strip(squares: usize) -> Self {
        if squares == 0 {
            MoveKind::TriangleTriangle
        } else {
            MoveKind::TriangleSquareTriangle { squares }
        }
    }

    /// Change in path length when the move is applied.
    pub fn length_change(self) -> i64 {
        match self {
            MoveKind::Trivial => -2,
            MoveKind::Triangle => -1,
            _ => 0,
        }
    }

    pub fn is_reducing(self) -> bool {
        self.length_change() < 0
    }

    pub fn old_len(self) -> usize {
        match self {
            MoveKind::Trivial | MoveKind::Triangle | MoveKind::Square | MoveKind::TriangleTriangle => 2,
            MoveKind::TriangleSquareTriangle { squares } => squares + 2,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveKind::Trivial => write!(f, "trivial"),
            MoveKind::Triangle => write!(f, "triangle"),
            MoveKind::Square => write!(f, "square"),
            MoveKind::TriangleTriangle => write!(f, "triangle-triangle"),
            MoveKind::TriangleSquareTriangle { squares } => write!(f, "triangle-square-triangle({squares})"),
        }
    }
}

/// A move matched at `offset` darts into some path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveInstance {
    #[serde(flatten)]
    pub kind: MoveKind,
    pub offset: usize,
    pub old: PathSeq,
    pub new: PathSeq,
    pub cells: Vec<CellId>,
}

/// Cell boundary in one of its two orientations.
fn oriented(boundary: &[Dart], forward: bool) -> Vec<Dart> {
    if forward {
        boundary.to_vec()
    } else {
        boundary.iter().rev().map(|d| d.rev()).collect()
    }
}

/// Oriented boundaries `(cell, cycle, position)` in which `d` occurs.
fn occurrences(k: &TsComplex, d: Dart) -> Vec<(CellId, CellKind, Vec<Dart>, usize)> {
    let mut out = Vec::new();
    let mut seen_cells: Vec<CellId> = Vec::new();
    for &(c, _) in k.cells_on_edge(d.edge) {
        if seen_cells.contains(&c) {
            continue;
        }
        seen_cells.push(c);
        let cell = k.cell(c).unwrap();
        for forward in [true, false] {
            let cyc = oriented(&cell.boundary, forward);
            for (j, &x) in cyc.iter().enumerate() {
                if x == d {
                    out.push((c, cell.kind, cyc.clone(), j));
                }
            }
        }
    }
    out
}

fn path_from(k: &TsComplex, start: VertexId, darts: Vec<Dart>) -> PathSeq {
    PathSeq::from_darts(k, start, darts).expect("cell boundary pieces are paths")
}

/// Every basic move whose old path is a consecutive subpath of `path`.
pub fn find_path_moves(k: &TsComplex, path: &PathSeq) -> Vec<MoveInstance> {
    find_path_moves_bounded(k, path, DEFAULT_STRIP_BOUND)
}

pub fn find_path_moves_bounded(k: &TsComplex, path: &PathSeq, strip_bound: usize) -> Vec<MoveInstance> {
    let mut out = Vec::new();
    for i in 0..path.len() {
        moves_at(k, path, i, strip_bound, &mut out);
    }
    out.sort_by(|a, b| (a.offset, a.kind, &a.new.darts, &a.cells).cmp(&(b.offset, b.kind, &b.new.darts, &b.cells)));
    out.dedup();
    out
}

/// Moves whose old path starts at dart `i` of `path`.
pub fn moves_at(k: &TsComplex, path: &PathSeq, i: usize, strip_bound: usize, out: &mut Vec<MoveInstance>) {
    let darts = &path.darts;
    let u = path.vertices[i];
    if i + 1 < darts.len() && darts[i + 1] == darts[i].rev() {
        out.push(MoveInstance {
            kind: MoveKind::Trivial,
            offset: i,
            old: path.subpath(i, i + 2),
            new: PathSeq::trivial(u),
            cells: Vec::new(),
        });
    }
    for (c, kind, cyc, j) in occurrences(k, darts[i]) {
        let n = cyc.len();
        let at = |s: usize| cyc[(j + s) % n];
        if i + 1 < darts.len() && darts[i + 1] == at(1) {
            match kind {
                CellKind::Triangle => out.push(MoveInstance {
                    kind: MoveKind::Triangle,
                    offset: i,
                    old: path.subpath(i, i + 2),
                    new: path_from(k, u, vec![at(2).rev()]),
                    cells: vec![c],
                }),
                CellKind::Square => out.push(MoveInstance {
                    kind: MoveKind::Square,
                    offset: i,
                    old: path.subpath(i, i + 2),
                    new: path_from(k, u, vec![at(3).rev(), at(2).rev()]),
                    cells: vec![c],
                }),
            }
        }
        if kind == CellKind::Triangle {
            // Opening triangle u, a0, b0: rung a0 -> b0, new path starts u -> b0.
            let start = Strip { rung: at(1), new: vec![at(2).rev()], cells: vec![c] };
            extend_strip(k, path, i, 1, start, strip_bound, out);
        }
    }
}

#[derive(Clone)]
struct Strip {
    rung: Dart,
    new: Vec<Dart>,
    cells: Vec<CellId>,
}

/// Continues a strip whose first `s` old darts (from offset `i`) are matched.
fn extend_strip(k: &TsComplex, path: &PathSeq, i: usize, s: usize, strip: Strip, bound: usize, out: &mut Vec<MoveInstance>) {
    let Some(&p) = path.darts.get(i + s) else { return };
    let squares = s - 1;
    for (c, kind, cyc, m) in occurrences(k, p) {
        let n = cyc.len();
        let at = |t: usize| cyc[(m + t) % n];
        if at(n - 1) != strip.rung.rev() {
            continue;
        }
        match kind {
            CellKind::Triangle => {
                let mut new = strip.new.clone();
                new.push(at(1).rev());
                let mut cells = strip.cells.clone();
                cells.push(c);
                out.push(MoveInstance {
                    kind: MoveKind::strip(squares),
                    offset: i,
                    old: path.subpath(i, i + s + 1),
                    new: path_from(k, path.vertices[i], new),
                    cells,
                });
            }
            CellKind::Square if squares < bound => {
                let mut next = strip.clone();
                next.new.push(at(2).rev());
                next.rung = at(1);
                next.cells.push(c);
                extend_strip(k, path, i, s + 1, next, bound, out);
            }
            CellKind::Square => {}
        }
    }
}

/// Splices the move's new path in at its offset.
pub fn apply_move(path: &PathSeq, mv: &MoveInstance) -> Result<PathSeq> {
    let end = mv.offset + mv.old.len();
    if end > path.len() || path.subpath(mv.offset, end) != mv.old {
        return Err(TsqError::OffsetMismatch(mv.offset));
    }
    Ok(path.splice(mv.offset, mv.old.len(), &mv.new))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Straightening {
    pub input: PathSeq,
    pub geodesic: PathSeq,
    pub script: Vec<MoveInstance>,
}

impl Straightening {
    /// Re-applies the script to the input.
    pub fn replay(&self) -> Result<PathSeq> {
        let mut p = self.input.clone();
        for mv in &self.script {
            p = apply_move(&p, mv)?;
        }
        Ok(p)
    }
}

fn first_reducing(moves: &[MoveInstance]) -> Option<&MoveInstance> {
    moves
        .iter()
        .filter(|m| m.kind.is_reducing())
        .min_by_key(|m| (m.kind != MoveKind::Trivial, m.offset))
}

/// Rewrites `path` into a geodesic with the same endpoints using only basic
/// moves. Reducing moves are taken greedily; otherwise length-preserving
/// rewrites are explored breadth first until a reducing move appears.
pub fn straighten(k: &TsComplex, path: &PathSeq) -> Result<Straightening> {
    straighten_with_budget(k, path, DEFAULT_BUDGET)
}

pub fn straighten_with_budget(k: &TsComplex, path: &PathSeq, budget: usize) -> Result<Straightening> {
    let target = distance(k, path.start(), path.end())? as usize;
    let mut cur = path.clone();
    let mut script = Vec::new();
    while cur.len() > target {
        let moves = find_path_moves(k, &cur);
        if let Some(mv) = first_reducing(&moves) {
            cur = apply_move(&cur, mv)?;
            script.push(mv.clone());
            continue;
        }
        let (steps, next) = search_preserving(k, &cur, budget)?;
        script.extend(steps);
        cur = next;
    }
    Ok(Straightening { input: path.clone(), geodesic: cur, script })
}

/// Breadth-first search over length-preserving rewrites from `start`; stops
/// at the first path admitting a reducing move and returns the moves leading
/// there plus that reducing move.
fn search_preserving(k: &TsComplex, start: &PathSeq, budget: usize) -> Result<(Vec<MoveInstance>, PathSeq)> {
    let mut parent: HashMap<PathSeq, Option<(PathSeq, MoveInstance)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(p) = queue.pop_front() {
        let moves = find_path_moves(k, &p);
        if let Some(mv) = first_reducing(&moves) {
            let reduced = apply_move(&p, mv)?;
            let mut steps = vec![mv.clone()];
            let mut at = p;
            while let Some(Some((prev, m))) = parent.get(&at) {
                steps.push(m.clone());
                at = prev.clone();
            }
            steps.reverse();
            return Ok((steps, reduced));
        }
        for mv in moves {
            let q = apply_move(&p, &mv)?;
            if parent.contains_key(&q) {
                continue;
            }
            if parent.len() >= budget {
                return Err(TsqError::BudgetExhausted(budget));
            }
            parent.insert(q.clone(), Some((p.clone(), mv)));
            queue.push_back(q);
        }
    }
    Err(TsqError::NotCat0(format!("no reducing move reachable from {start}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveGraph {
    pub nodes: Vec<PathSeq>,
    /// `(from, to, kind)` with `from < to`.
    pub edges: Vec<(usize, usize, MoveKind)>,
    pub connected: bool,
}

/// Geodesics from `u` to `v` joined by single length-preserving moves.
pub fn geodesic_move_graph(k: &TsComplex, u: VertexId, v: VertexId, cap: usize) -> Result<MoveGraph> {
    let list = enumerate_geodesics(k, u, v, cap)?;
    if list.overflow {
        return Err(TsqError::CapOverflow(cap));
    }
    let nodes = list.paths;
    let index: HashMap<&PathSeq, usize> = nodes.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut edges = Vec::new();
    let mut uf = UnionFind::<usize>::new(nodes.len());
    for (i, p) in nodes.iter().enumerate() {
        for mv in find_path_moves(k, p) {
            if mv.kind.is_reducing() {
                continue;
            }
            let q = apply_move(p, &mv)?;
            if let Some(&j) = index.get(&q) {
                if i < j {
                    edges.push((i, j, mv.kind));
                    uf.union(i, j);
                }
            }
        }
    }
    edges.sort();
    edges.dedup();
    let connected = (1..nodes.len()).all(|i| uf.equiv(0, i));
    Ok(MoveGraph { nodes, edges, connected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, grid_vertex};
    use crate::metric::subspace_distance;

    fn kinds(ms: &[MoveInstance]) -> Vec<MoveKind> {
        ms.iter().map(|m| m.kind).collect()
    }

    #[test]
    fn detects_each_kind() {
        let sq = catalog::single_square();
        let back = PathSeq::through(&sq, &[0, 1, 0]).unwrap();
        assert_eq!(kinds(&find_path_moves(&sq, &back)), vec![MoveKind::Trivial]);
        let two = PathSeq::through(&sq, &[0, 1, 2]).unwrap();
        let ms = find_path_moves(&sq, &two);
        assert_eq!(kinds(&ms), vec![MoveKind::Square]);
        assert_eq!(ms[0].new.vertices, vec![0, 3, 2]);

        let tri = catalog::single_triangle();
        let p = PathSeq::through(&tri, &[0, 1, 2]).unwrap();
        let ms = find_path_moves(&tri, &p);
        assert_eq!(kinds(&ms), vec![MoveKind::Triangle]);
        assert_eq!(ms[0].new.vertices, vec![0, 2]);

        let rh = catalog::rhombus();
        let p = PathSeq::through(&rh, &[0, 2, 1]).unwrap();
        let ms = find_path_moves(&rh, &p);
        assert_eq!(kinds(&ms), vec![MoveKind::TriangleTriangle]);
        assert_eq!(ms[0].new.vertices, vec![0, 3, 1]);
    }

    #[test]
    fn detects_long_strip() {
        let k = catalog::tst_strip(3);
        let p = PathSeq::through(&k, &[0, 2, 3, 4, 5, 1]).unwrap();
        let ms: Vec<_> = find_path_moves(&k, &p).into_iter().filter(|m| m.old.len() == 5).collect();
        assert_eq!(kinds(&ms), vec![MoveKind::TriangleSquareTriangle { squares: 3 }]);
        assert_eq!(ms[0].new.vertices, vec![0, 6, 7, 8, 9, 1]);
        assert_eq!(ms[0].cells.len(), 5);
        assert!(find_path_moves_bounded(&k, &p, 2).iter().all(|m| m.old.len() < 5));
    }

    #[test]
    fn moves_obey_length_table_and_stay_close() {
        let k = catalog::tst_strip(2);
        let paths = [vec![0, 2, 3, 4, 1], vec![0, 5, 6, 7, 1], vec![2, 3, 6, 5], vec![0, 2, 0]];
        for vs in paths {
            let p = PathSeq::through(&k, &vs).unwrap();
            for m in find_path_moves(&k, &p) {
                assert_eq!(m.new.len() as i64 - m.old.len() as i64, m.kind.length_change());
                assert_eq!((m.old.start(), m.old.end()), (m.new.start(), m.new.end()));
                if m.kind != MoveKind::Trivial {
                    assert_eq!(subspace_distance(&k, &m.old, &m.new), 1);
                }
                let q = apply_move(&p, &m).unwrap();
                assert_eq!(q.len() as i64, p.len() as i64 + m.kind.length_change());
            }
        }
    }

    #[test]
    fn apply_rejects_wrong_offset() {
        let sq = catalog::single_square();
        let p = PathSeq::through(&sq, &[0, 1, 2]).unwrap();
        let mut m = find_path_moves(&sq, &p).remove(0);
        m.offset = 1;
        assert!(matches!(apply_move(&p, &m), Err(TsqError::OffsetMismatch(1))));
    }

    #[test]
    fn straighten_examples() {
        let tri = catalog::single_triangle();
        let p = PathSeq::through(&tri, &[0, 1, 2]).unwrap();
        let s = straighten(&tri, &p).unwrap();
        assert_eq!(s.geodesic.len(), 1);
        assert_eq!(kinds(&s.script), vec![MoveKind::Triangle]);

        let k = catalog::square_grid(3, 3);
        let g = |x, y| grid_vertex(3, x, y);
        let p = PathSeq::through(&k, &[g(0, 0), g(1, 0), g(1, 1), g(0, 1), g(0, 2)]).unwrap();
        let s = straighten(&k, &p).unwrap();
        assert_eq!(s.geodesic.len(), 2);
        assert_eq!(s.replay().unwrap(), s.geodesic);
        assert!(s.script.iter().any(|m| m.kind == MoveKind::Square));
    }

    #[test]
    fn move_graphs() {
        let k = catalog::square_grid(3, 3);
        let g = |x, y| grid_vertex(3, x, y);
        let mg = geodesic_move_graph(&k, g(0, 0), g(2, 1), 100).unwrap();
        assert_eq!(mg.nodes.len(), 3);
        assert_eq!(mg.edges.len(), 2);
        assert!(mg.connected);
        let line = geodesic_move_graph(&k, g(0, 0), g(3, 0), 100).unwrap();
        assert_eq!((line.nodes.len(), line.edges.len()), (1, 0));
        assert!(matches!(geodesic_move_graph(&k, g(0, 0), g(3, 3), 5), Err(TsqError::CapOverflow(5))));
    }
}
