//! Intervals, first moves, choke chains and Gersten-Short geodesics.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::complex::{subcomplex, CellId, CellKind, Dart, EdgeId, TsComplex, VertexId};
use crate::curvature::{check_npc, collapse_certificate};
use crate::error::{Result, TsqError};
use crate::metric::{bfs_from, distance};
use crate::moves::{find_path_moves, MoveKind};
use crate::path::PathSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeClass {
    Vertical,
    Horizontal,
}

/// The full subcomplex on the vertices lying on geodesics from `u` to `v`.
#[derive(Clone, Debug)]
pub struct Interval {
    pub u: VertexId,
    pub v: VertexId,
    pub length: u32,
    pub complex: TsComplex,
    /// `(d(u, w), d(w, v))` per vertex.
    pub labels: BTreeMap<VertexId, (u32, u32)>,
    pub edge_classes: BTreeMap<EdgeId, EdgeClass>,
}

/// Distances from `s` that are at most `bound`, by vertex index.
fn ball(k: &TsComplex, s: usize, bound: u32) -> Vec<Option<u32>> {
    let mut dist = vec![None; k.num_vertices()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(i) = queue.pop_front() {
        let d = dist[i].unwrap() + 1;
        if d > bound {
            continue;
        }
        for &j in k.heads_at(i) {
            if dist[j].is_none() {
                dist[j] = Some(d);
                queue.push_back(j);
            }
        }
    }
    dist
}

pub fn interval(k: &TsComplex, u: VertexId, v: VertexId) -> Result<Interval> {
    let su = k.check_vertex(u)?;
    let sv = k.check_vertex(v)?;
    let dv = bfs_from(k, &[sv]);
    let length = dv[su].ok_or(TsqError::Unreachable { from: u, to: v })?;
    let du = ball(k, su, length);
    let mut labels = BTreeMap::new();
    for (i, (a, b)) in du.iter().zip(&dv).enumerate() {
        if let (Some(a), Some(b)) = (a, b) {
            if a + b == length {
                labels.insert(k.vertex_at(i), (*a, *b));
            }
        }
    }
    let sub = subcomplex(k, &labels.keys().copied().collect::<Vec<_>>())?;
    let edge_classes = sub
        .edges()
        .iter()
        .map(|e| {
            let class = if labels[&e.ends[0]].0 == labels[&e.ends[1]].0 { EdgeClass::Horizontal } else { EdgeClass::Vertical };
            (e.id, class)
        })
        .collect();
    Ok(Interval { u, v, length, complex: sub, labels, edge_classes })
}

/// Distance labels over some complex, used to run first-move logic either on
/// a materialized interval or directly inside the ambient complex.
struct Levels<'a> {
    k: &'a TsComplex,
    u: VertexId,
    length: u32,
    du: Vec<Option<u32>>,
    dv: Vec<Option<u32>>,
}

impl<'a> Levels<'a> {
    fn of_interval(iv: &'a Interval) -> Self {
        let k = &iv.complex;
        let du = k.vertices().iter().map(|v| Some(iv.labels[v].0)).collect();
        let dv = k.vertices().iter().map(|v| Some(iv.labels[v].1)).collect();
        Levels { k, u: iv.u, length: iv.length, du, dv }
    }

    fn inside(&self, w: VertexId) -> bool {
        let i = self.k.vertex_index(w).unwrap();
        matches!((self.du[i], self.dv[i]), (Some(a), Some(b)) if a + b == self.length)
    }

    fn level(&self, w: VertexId) -> Option<u32> {
        let i = self.k.vertex_index(w).unwrap();
        if self.inside(w) {
            self.du[i]
        } else {
            None
        }
    }

    fn cell_inside(&self, c: CellId) -> bool {
        let cell = self.k.cell(c).unwrap();
        cell.boundary.iter().all(|&d| self.inside(self.k.tail(d)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum InitialLink {
    Single { dart: Dart },
    Pair { darts: [Dart; 2], cell: CellId },
}

fn initial_link_in(lv: &Levels) -> Result<InitialLink> {
    let k = lv.k;
    if lv.length == 0 {
        return Err(TsqError::BadPath("initial link needs distinct endpoints".into()));
    }
    let first: Vec<Dart> = k.out_darts(lv.u).iter().copied().filter(|&d| lv.level(k.head(d)) == Some(1)).collect();
    match first.as_slice() {
        [d] => Ok(InitialLink::Single { dart: *d }),
        [a, b] => {
            let cells: BTreeSet<CellId> = k
                .corners_at(lv.u)
                .iter()
                .filter(|c| c.darts == (*a, *b) || c.darts == (*b, *a))
                .map(|c| c.cell)
                .filter(|&c| lv.cell_inside(c))
                .collect();
            match cells.len() {
                1 => Ok(InitialLink::Pair { darts: [*a, *b], cell: *cells.first().unwrap() }),
                0 => Err(TsqError::NotCat0(format!("first darts {a}, {b} span no cell of the interval"))),
                _ => Err(TsqError::NotCat0(format!("first darts {a}, {b} span several cells"))),
            }
        }
        _ => Err(TsqError::NotCat0(format!("{} first darts leave v{}", first.len(), lv.u))),
    }
}

/// The neighbours of `u` one step closer to `v`, with the witnessing cell
/// when there are two.
pub fn initial_link(iv: &Interval) -> Result<InitialLink> {
    initial_link_in(&Levels::of_interval(iv))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    Edge,
    Square,
    TriangleTriangle,
    TriangleSquareTriangle { squares: usize },
}

impl StepKind {
    pub fn is_move(self) -> bool {
        self != StepKind::Edge
    }

    pub fn as_move(self) -> Option<MoveKind> {
        match self {
            StepKind::Edge => None,
            StepKind::Square => Some(MoveKind::Square),
            StepKind::TriangleTriangle => Some(MoveKind::TriangleTriangle),
            StepKind::TriangleSquareTriangle { squares } => Some(MoveKind::TriangleSquareTriangle { squares }),
        }
    }
}

/// One link of a choke chain: a unique edge, or a unique move whose two
/// sides both lead to the next choke point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChokeStep {
    #[serde(flatten)]
    pub kind: StepKind,
    pub from: VertexId,
    pub to: VertexId,
    /// One path for an edge step, two (sorted) for a move.
    pub sides: Vec<PathSeq>,
    pub cells: Vec<CellId>,
}

impl ChokeStep {
    pub fn len(&self) -> usize {
        self.sides[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn edge_between(k: &TsComplex, a: VertexId, b: VertexId) -> Option<Dart> {
    k.out_darts(a).iter().copied().find(|&d| k.head(d) == b)
}

fn first_move_in(lv: &Levels) -> Result<ChokeStep> {
    let k = lv.k;
    let u = lv.u;
    match initial_link_in(lv)? {
        InitialLink::Single { dart } => {
            let to = k.head(dart);
            Ok(ChokeStep {
                kind: StepKind::Edge,
                from: u,
                to,
                sides: vec![PathSeq::from_darts(k, u, vec![dart])?],
                cells: Vec::new(),
            })
        }
        InitialLink::Pair { darts, cell } => {
            let c = k.cell(cell).unwrap();
            let (a0, b0) = (k.head(darts[0]), k.head(darts[1]));
            match c.kind {
                CellKind::Square => {
                    let cyc = k.cell_cycle(c);
                    let pos = cyc.iter().position(|&x| x == u).unwrap();
                    let opp = cyc[(pos + 2) % 4];
                    if lv.level(opp) != Some(2) {
                        return Err(TsqError::NotCat0(format!("square {cell} does not descend to its far corner")));
                    }
                    let mut sides = vec![PathSeq::through(k, &[u, a0, opp])?, PathSeq::through(k, &[u, b0, opp])?];
                    sides.sort();
                    Ok(ChokeStep { kind: StepKind::Square, from: u, to: opp, sides, cells: vec![cell] })
                }
                CellKind::Triangle => strip_walk(lv, cell, a0, b0),
            }
        }
    }
}

/// Follows squares glued across successive horizontal rungs until a
/// triangle caps the strip.
fn strip_walk(lv: &Levels, first: CellId, a0: VertexId, b0: VertexId) -> Result<ChokeStep> {
    let k = lv.k;
    let mut a_side = vec![lv.u, a0];
    let mut b_side = vec![lv.u, b0];
    let mut cells = vec![first];
    let (mut a, mut b, mut prev) = (a0, b0, first);
    let mut level = 1;
    loop {
        let mut next: Vec<(CellId, Vec<VertexId>)> = Vec::new();
        let rungs: Vec<Dart> = k.out_darts(a).iter().copied().filter(|&d| k.head(d) == b).collect();
        for r in rungs {
            for &(c, _) in k.cells_on_edge(r.edge) {
                if c == prev || next.iter().any(|x| x.0 == c) || !lv.cell_inside(c) {
                    continue;
                }
                let cyc = k.cell_cycle(k.cell(c).unwrap());
                let others: Vec<VertexId> = cyc.iter().copied().filter(|&x| x != a && x != b).collect();
                if others.iter().all(|&x| lv.level(x) == Some(level + 1)) {
                    next.push((c, cyc));
                }
            }
        }
        let [(c, cyc)] = next.as_slice() else {
            return Err(TsqError::NotCat0(format!("strip from v{} has {} continuations at level {level}", lv.u, next.len())));
        };
        cells.push(*c);
        if cyc.len() == 3 {
            let w = cyc.iter().copied().find(|&x| x != a && x != b).unwrap();
            a_side.push(w);
            b_side.push(w);
            let squares = cells.len() - 2;
            let kind = if squares == 0 { StepKind::TriangleTriangle } else { StepKind::TriangleSquareTriangle { squares } };
            let mut sides = vec![PathSeq::through(k, &a_side)?, PathSeq::through(k, &b_side)?];
            sides.sort();
            return Ok(ChokeStep { kind, from: lv.u, to: w, sides, cells });
        }
        let n = cyc.len();
        let ia = cyc.iter().position(|&x| x == a).unwrap();
        let na = if cyc[(ia + 1) % n] == b { cyc[(ia + n - 1) % n] } else { cyc[(ia + 1) % n] };
        let ib = cyc.iter().position(|&x| x == b).unwrap();
        let nb = if cyc[(ib + 1) % n] == a { cyc[(ib + n - 1) % n] } else { cyc[(ib + 1) % n] };
        if edge_between(k, na, nb).is_none() {
            return Err(TsqError::NotCat0("strip square has no opposite rung".into()));
        }
        a_side.push(na);
        b_side.push(nb);
        a = na;
        b = nb;
        prev = *c;
        level += 1;
        if level >= lv.length {
            return Err(TsqError::NotCat0("strip does not cap inside the interval".into()));
        }
    }
}

/// The unique first edge or first move from `u` toward `v`.
pub fn first_move(iv: &Interval) -> Result<ChokeStep> {
    first_move_in(&Levels::of_interval(iv))
}

/// First move and initial link read off arbitrary distance labels on `k`
/// (by vertex index) instead of a computed interval.
pub(crate) fn first_move_from_labels(
    k: &TsComplex,
    u: VertexId,
    length: u32,
    du: Vec<Option<u32>>,
    dv: Vec<Option<u32>>,
) -> Result<(InitialLink, ChokeStep)> {
    let lv = Levels { k, u, length, du, dv };
    Ok((initial_link_in(&lv)?, first_move_in(&lv)?))
}

/// Successive first moves from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChokeChain {
    pub vertices: Vec<VertexId>,
    pub steps: Vec<ChokeStep>,
}

impl ChokeChain {
    pub fn len(&self) -> usize {
        self.steps.iter().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn move_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.kind.is_move()).count()
    }

    /// Exact number of Gersten-Short geodesics.
    pub fn count(&self) -> BigUint {
        BigUint::from(1u32) << self.move_steps()
    }

    /// Vertices any Gersten-Short geodesic can occupy at each integer time.
    pub fn positions(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![vec![self.vertices[0]]];
        for s in &self.steps {
            for t in 1..=s.len() {
                let mut at: Vec<VertexId> = s.sides.iter().map(|p| p.vertices[t]).collect();
                at.sort_unstable();
                at.dedup();
                out.push(at);
            }
        }
        out
    }

    /// Geodesics obtained by choosing sides; `choice` bit `i` picks the
    /// second side of the `i`-th move.
    pub fn path(&self, choice: &BigUint) -> PathSeq {
        let mut p = PathSeq::trivial(self.vertices[0]);
        let mut bit = 0u64;
        for s in &self.steps {
            let side = if s.kind.is_move() {
                let b = choice.bit(bit);
                bit += 1;
                &s.sides[b as usize]
            } else {
                &s.sides[0]
            };
            p = p.concat(side);
        }
        p
    }
}

pub fn choke_chain(k: &TsComplex, u: VertexId, v: VertexId) -> Result<ChokeChain> {
    let sv = k.check_vertex(v)?;
    k.check_vertex(u)?;
    let dv = bfs_from(k, &[sv]);
    let mut vertices = vec![u];
    let mut steps = Vec::new();
    let mut cur = u;
    while cur != v {
        let sc = k.vertex_index(cur).unwrap();
        let length = dv[sc].ok_or(TsqError::Unreachable { from: u, to: v })?;
        let lv = Levels { k, u: cur, length, du: ball(k, sc, length), dv: dv.clone() };
        let step = first_move_in(&lv)?;
        cur = step.to;
        vertices.push(cur);
        steps.push(step);
    }
    Ok(ChokeChain { vertices, steps })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GsFamily {
    pub chain: ChokeChain,
    pub count: BigUint,
    pub paths: Vec<PathSeq>,
    pub overflow: bool,
}

/// All Gersten-Short geodesics from `u` to `v`, at most `cap` of them.
pub fn gs_geodesics(k: &TsComplex, u: VertexId, v: VertexId, cap: usize) -> Result<GsFamily> {
    let chain = choke_chain(k, u, v)?;
    let count = chain.count();
    let mut paths = Vec::new();
    let mut choice = BigUint::ZERO;
    while choice < count && paths.len() < cap {
        paths.push(chain.path(&choice));
        choice += 1u32;
    }
    let overflow = BigUint::from(paths.len()) < count;
    Ok(GsFamily { chain, count, paths, overflow })
}

/// Largest synchronous distance between any geodesic of one family and any
/// of another. Side choices are independent, so this is the maximum over
/// times of the distance between the two position sets.
pub fn family_sync_max(k: &TsComplex, a: &ChokeChain, b: &ChokeChain) -> u32 {
    let pa = a.positions();
    let pb = b.positions();
    let n = pa.len().max(pb.len());
    let clamp = |p: &[Vec<VertexId>], t: usize| p[t.min(p.len() - 1)].clone();
    let mut best = 0;
    for t in 0..n {
        for &x in &clamp(&pa, t) {
            for y in clamp(&pb, t) {
                best = best.max(distance(k, x, y).unwrap_or(u32::MAX));
            }
        }
    }
    best
}

/// Largest subspace distance between a geodesic of one family and one of
/// the other.
pub fn family_subspace_max(k: &TsComplex, a: &ChokeChain, b: &ChokeChain) -> u32 {
    one_sided_family(k, a, b).max(one_sided_family(k, b, a))
}

fn one_sided_family(k: &TsComplex, from: &ChokeChain, to: &ChokeChain) -> u32 {
    let xs: BTreeSet<VertexId> = from.positions().into_iter().flatten().collect();
    let mut best = 0;
    for x in xs {
        let dist = bfs_from(k, &[k.vertex_index(x).unwrap()]);
        let d = |w: VertexId| dist[k.vertex_index(w).unwrap()].unwrap_or(u32::MAX);
        // Each piece contributes the closer of its vertices; the adversary
        // picks, per move, the side that is farther from x.
        let mut worst = u32::MAX;
        for s in &to.steps {
            let piece = s
                .sides
                .iter()
                .map(|p| p.vertices.iter().map(|&w| d(w)).min().unwrap())
                .max()
                .unwrap();
            worst = worst.min(piece);
        }
        if to.steps.is_empty() {
            worst = d(to.vertices[0]);
        }
        best = best.max(worst);
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsFtReport {
    pub u: VertexId,
    pub v: VertexId,
    pub count: BigUint,
    pub max_sync: u32,
    /// Whether simultaneous points of any two members always share a cell.
    pub cell_adjacent: bool,
    pub holds: bool,
}

/// Pairwise synchronous distance within the Gersten-Short family of `(u, v)`.
pub fn gs_one_ft_check(k: &TsComplex, u: VertexId, v: VertexId) -> Result<GsFtReport> {
    let chain = choke_chain(k, u, v)?;
    let max_sync = family_sync_max(k, &chain, &chain);
    let cell_adjacent = chain.steps.iter().all(|s| {
        (0..=s.len()).all(|t| {
            let (x, y) = (s.sides[0].at(t), s.sides[s.sides.len() - 1].at(t));
            x == y || s.cells.iter().any(|&c| {
                let cyc = k.cell_cycle(k.cell(c).unwrap());
                cyc.contains(&x) && cyc.contains(&y)
            })
        })
    });
    Ok(GsFtReport { u, v, count: chain.count(), max_sync, cell_adjacent, holds: max_sync <= 1 })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalEdgeReport {
    pub vertical: usize,
    pub horizontal: usize,
    pub violations: Vec<String>,
}

impl IntervalEdgeReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Vertical edges extend to geodesics; horizontal edges are rungs of a
/// detected length-preserving move inside the interval.
pub fn interval_edge_check(iv: &Interval) -> IntervalEdgeReport {
    let mut rep = IntervalEdgeReport::default();
    let k = &iv.complex;
    for e in k.edges() {
        let [x, y] = e.ends;
        let (lx, ly) = (iv.labels[&x], iv.labels[&y]);
        match iv.edge_classes[&e.id] {
            EdgeClass::Vertical => {
                rep.vertical += 1;
                let (lo, hi) = if lx.0 < ly.0 { (lx, ly) } else { (ly, lx) };
                if lo.0 + 1 + hi.1 != iv.length {
                    rep.violations.push(format!("vertical edge {} is on no geodesic", e.id));
                }
            }
            EdgeClass::Horizontal => {
                rep.horizontal += 1;
                if !rung_in_move(iv, x, y) {
                    rep.violations.push(format!("horizontal edge {} lies in no move", e.id));
                }
            }
        }
    }
    rep
}

/// Walks the strip through rung `x - y` in both directions and checks that
/// move detection recognizes it.
fn rung_in_move(iv: &Interval, x: VertexId, y: VertexId) -> bool {
    let k = &iv.complex;
    let level = |w: VertexId| iv.labels[&w].0 as i64;
    // Chains of (a, b) rungs going down (dir = -1) and up (dir = +1).
    let walk = |dir: i64| -> Option<(Vec<VertexId>, Vec<VertexId>)> {
        let (mut a, mut b) = (x, y);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut prev: Option<CellId> = None;
        for _ in 0..=iv.length {
            let mut found = None;
            for d in k.out_darts(a).iter().filter(|&&d| k.head(d) == b) {
                for &(c, _) in k.cells_on_edge(d.edge) {
                    if Some(c) == prev {
                        continue;
                    }
                    let cyc = k.cell_cycle(k.cell(c).unwrap());
                    let others: Vec<_> = cyc.iter().copied().filter(|&w| w != a && w != b).collect();
                    if others.iter().all(|&w| level(w) == level(a) + dir) {
                        found = Some((c, cyc));
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            let (c, cyc) = found?;
            if cyc.len() == 3 {
                let w = cyc.iter().copied().find(|&w| w != a && w != b).unwrap();
                xs.push(w);
                ys.push(w);
                return Some((xs, ys));
            }
            let n = 4;
            let ia = cyc.iter().position(|&w| w == a).unwrap();
            let na = if cyc[(ia + 1) % n] == b { cyc[(ia + n - 1) % n] } else { cyc[(ia + 1) % n] };
            let ib = cyc.iter().position(|&w| w == b).unwrap();
            let nb = if cyc[(ib + 1) % n] == a { cyc[(ib + n - 1) % n] } else { cyc[(ib + 1) % n] };
            xs.push(na);
            ys.push(nb);
            a = na;
            b = nb;
            prev = Some(c);
        }
        None
    };
    let (Some((mut down_x, _)), Some((up_x, up_y))) = (walk(-1), walk(1)) else {
        return false;
    };
    down_x.reverse();
    let mut old = down_x;
    old.push(x);
    old.extend(up_x);
    let _ = up_y;
    let Ok(path) = PathSeq::through(k, &old) else { return false };
    find_path_moves(k, &path).iter().any(|m| {
        m.offset == 0
            && m.old.len() == path.len()
            && matches!(m.kind, MoveKind::TriangleTriangle | MoveKind::TriangleSquareTriangle { .. })
            && m.new.vertices.contains(&y)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalCat0Report {
    pub npc: bool,
    pub collapsible: bool,
}

impl IntervalCat0Report {
    pub fn ok(&self) -> bool {
        self.npc && self.collapsible
    }
}

pub fn interval_cat0_check(iv: &Interval) -> IntervalCat0Report {
    IntervalCat0Report {
        npc: check_npc(&iv.complex).is_npc(),
        collapsible: collapse_certificate(&iv.complex).map(|c| c.is_complete()).unwrap_or(false),
    }
}
