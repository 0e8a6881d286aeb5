//! Nonpositive curvature via short loops in vertex links, plus a greedy
//! collapsibility certificate standing in for simple connectivity.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::complex::{vertex_link, CellId, Dart, EdgeId, TsComplex, VertexId, VertexLink, FULL_TURN};
use crate::error::{Result, TsqError};

/// A closed cycle in a vertex link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkLoop {
    /// Dart-nodes visited by the cycle, starting anywhere.
    pub cycle: Vec<Dart>,
    /// Indices into `VertexLink::edges`, in cycle order.
    #[serde(skip)]
    pub link_edges: Vec<usize>,
    pub weight: u32,
}

/// Weighted girth of a link multigraph. Loop edges and parallel edges count
/// as cycles of length 1 and 2.
pub fn shortest_link_loop(link: &VertexLink) -> Option<LinkLoop> {
    let mut best: Option<LinkLoop> = None;
    for (i, e) in link.edges.iter().enumerate() {
        if best.as_ref().is_some_and(|b| b.weight <= e.weight) {
            continue;
        }
        let candidate = if e.a == e.b {
            Some(LinkLoop { cycle: vec![link.nodes[e.a]], link_edges: vec![i], weight: e.weight })
        } else {
            shortest_path_avoiding(link, e.b, e.a, i).map(|(w, path_edges, path_nodes)| {
                let mut link_edges = vec![i];
                link_edges.extend(path_edges);
                let cycle = std::iter::once(e.a).chain(path_nodes).map(|n| link.nodes[n]).collect();
                LinkLoop { cycle, link_edges, weight: e.weight + w }
            })
        };
        if let Some(c) = candidate {
            if best.as_ref().is_none_or(|b| c.weight < b.weight) {
                best = Some(c);
            }
        }
    }
    best
}

/// Dijkstra from `from` to `to` skipping link edge `skip`. Returns the weight,
/// the edges used and the nodes visited (starting at `from`, excluding `to`).
fn shortest_path_avoiding(link: &VertexLink, from: usize, to: usize, skip: usize) -> Option<(u32, Vec<usize>, Vec<usize>)> {
    let n = link.nodes.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in link.edges.iter().enumerate() {
        if i == skip || e.a == e.b {
            continue;
        }
        adj[e.a].push((e.b, i));
        adj[e.b].push((e.a, i));
    }
    let mut dist = vec![u32::MAX; n];
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[from] = 0;
    heap.push(Reverse((0u32, from)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        if x == to {
            break;
        }
        for &(y, ei) in &adj[x] {
            let nd = d + link.edges[ei].weight;
            if nd < dist[y] {
                dist[y] = nd;
                prev[y] = Some((x, ei));
                heap.push(Reverse((nd, y)));
            }
        }
    }
    if dist[to] == u32::MAX {
        return None;
    }
    let mut edges = Vec::new();
    let mut nodes = Vec::new();
    let mut cur = to;
    while let Some((p, ei)) = prev[cur] {
        edges.push(ei);
        nodes.push(p);
        cur = p;
    }
    nodes.reverse();
    edges.reverse();
    Some((dist[to], edges, nodes))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NpcFlag {
    Npc,
    NotNpc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpcWitness {
    pub vertex: VertexId,
    pub cycle: Vec<Dart>,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpcVerdict {
    pub flag: NpcFlag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<NpcWitness>,
}

impl NpcVerdict {
    pub fn is_npc(&self) -> bool {
        self.flag == NpcFlag::Npc
    }
}

/// A 2-complex is nonpositively curved iff no vertex link has a closed loop
/// of weight strictly below a full turn. The first offending vertex (by id)
/// is reported.
pub fn check_npc(k: &TsComplex) -> NpcVerdict {
    for &v in k.vertices() {
        let link = vertex_link(k, v).expect("vertex exists");
        if let Some(lp) = shortest_link_loop(&link) {
            if lp.weight < FULL_TURN {
                return NpcVerdict {
                    flag: NpcFlag::NotNpc,
                    witness: Some(NpcWitness { vertex: v, cycle: lp.cycle, weight: lp.weight }),
                };
            }
        }
    }
    NpcVerdict { flag: NpcFlag::Npc, witness: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CollapseStep {
    /// Remove a cell through a free boundary edge.
    CellEdge { cell: CellId, edge: EdgeId },
    /// Remove a free edge through a leaf vertex.
    EdgeVertex { edge: EdgeId, vertex: VertexId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollapseStatus {
    Complete,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseCertificate {
    pub status: CollapseStatus,
    pub steps: Vec<CollapseStep>,
}

impl CollapseCertificate {
    pub fn is_complete(&self) -> bool {
        self.status == CollapseStatus::Complete
    }
}

struct Collapser<'a> {
    k: &'a TsComplex,
    cell_alive: HashSet<CellId>,
    edge_alive: HashSet<EdgeId>,
    vertex_alive: HashSet<VertexId>,
    occurrences: HashMap<EdgeId, usize>,
    incidence: HashMap<VertexId, usize>,
    free_cell_edges: BTreeSet<EdgeId>,
    leaf_edges: BTreeSet<EdgeId>,
}

impl<'a> Collapser<'a> {
    fn new(k: &'a TsComplex) -> Self {
        let mut occurrences: HashMap<EdgeId, usize> = k.edges().iter().map(|e| (e.id, 0)).collect();
        for c in k.cells() {
            for d in &c.boundary {
                *occurrences.get_mut(&d.edge).unwrap() += 1;
            }
        }
        let incidence = k.vertices().iter().map(|&v| (v, k.out_darts(v).len())).collect();
        let mut s = Collapser {
            k,
            cell_alive: k.cells().iter().map(|c| c.id).collect(),
            edge_alive: k.edges().iter().map(|e| e.id).collect(),
            vertex_alive: k.vertices().iter().copied().collect(),
            occurrences,
            incidence,
            free_cell_edges: BTreeSet::new(),
            leaf_edges: BTreeSet::new(),
        };
        for e in k.edges() {
            s.refresh(e.id);
        }
        s
    }

    fn leaf_end(&self, e: EdgeId) -> Option<VertexId> {
        let [a, b] = self.k.edge(e).unwrap().ends;
        if a == b || self.occurrences[&e] != 0 {
            return None;
        }
        match (self.incidence[&a] == 1, self.incidence[&b] == 1) {
            (true, true) => Some(a.max(b)),
            (true, false) => Some(a),
            (false, true) => Some(b),
            _ => None,
        }
    }

    fn refresh(&mut self, e: EdgeId) {
        self.free_cell_edges.remove(&e);
        self.leaf_edges.remove(&e);
        if !self.edge_alive.contains(&e) {
            return;
        }
        if self.occurrences[&e] == 1 {
            self.free_cell_edges.insert(e);
        } else if self.leaf_end(e).is_some() {
            self.leaf_edges.insert(e);
        }
    }

    fn remove_edge(&mut self, e: EdgeId) {
        self.edge_alive.remove(&e);
        let ends = self.k.edge(e).unwrap().ends;
        for v in ends {
            *self.incidence.get_mut(&v).unwrap() -= 1;
        }
        self.refresh(e);
        for v in ends {
            let darts: Vec<Dart> = self.k.out_darts(v).to_vec();
            for d in darts {
                self.refresh(d.edge);
            }
        }
    }

    fn run(mut self) -> CollapseCertificate {
        let mut steps = Vec::new();
        loop {
            if let Some(&e) = self.free_cell_edges.iter().next() {
                let cell = self
                    .k
                    .cells_on_edge(e)
                    .iter()
                    .map(|&(c, _)| c)
                    .find(|c| self.cell_alive.contains(c))
                    .expect("free edge has a live cell");
                self.cell_alive.remove(&cell);
                let boundary = self.k.cell(cell).unwrap().boundary.clone();
                for d in &boundary {
                    *self.occurrences.get_mut(&d.edge).unwrap() -= 1;
                }
                for d in &boundary {
                    self.refresh(d.edge);
                }
                self.remove_edge(e);
                steps.push(CollapseStep::CellEdge { cell, edge: e });
            } else if let Some(&e) = self.leaf_edges.iter().next() {
                let vertex = self.leaf_end(e).expect("leaf edge");
                self.remove_edge(e);
                self.vertex_alive.remove(&vertex);
                steps.push(CollapseStep::EdgeVertex { edge: e, vertex });
            } else {
                break;
            }
        }
        let complete = self.cell_alive.is_empty() && self.edge_alive.is_empty() && self.vertex_alive.len() == 1;
        CollapseCertificate {
            status: if complete { CollapseStatus::Complete } else { CollapseStatus::Inconclusive },
            steps,
        }
    }
}

/// Greedy elementary collapses, always taking the smallest free edge id and
/// preferring cell collapses. A complete certificate proves contractibility.
pub fn collapse_certificate(k: &TsComplex) -> Result<CollapseCertificate> {
    if !k.is_connected() {
        return Err(TsqError::Disconnected);
    }
    Ok(Collapser::new(k).run())
}

/// Replays a certificate, checking every step is a legal collapse.
pub fn verify_certificate(k: &TsComplex, cert: &CollapseCertificate) -> bool {
    let mut s = Collapser::new(k);
    for step in &cert.steps {
        match *step {
            CollapseStep::CellEdge { cell, edge } => {
                if !s.cell_alive.contains(&cell) || s.occurrences.get(&edge) != Some(&1) || !s.edge_alive.contains(&edge) {
                    return false;
                }
                let boundary = k.cell(cell).unwrap().boundary.clone();
                if !boundary.iter().any(|d| d.edge == edge) {
                    return false;
                }
                s.cell_alive.remove(&cell);
                for d in &boundary {
                    *s.occurrences.get_mut(&d.edge).unwrap() -= 1;
                }
                for d in &boundary {
                    s.refresh(d.edge);
                }
                s.remove_edge(edge);
            }
            CollapseStep::EdgeVertex { edge, vertex } => {
                if !s.edge_alive.contains(&edge) || s.occurrences[&edge] != 0 {
                    return false;
                }
                let [a, b] = k.edge(edge).unwrap().ends;
                if a == b || (vertex != a && vertex != b) || s.incidence[&vertex] != 1 {
                    return false;
                }
                s.remove_edge(edge);
                s.vertex_alive.remove(&vertex);
            }
        }
    }
    let done = s.cell_alive.is_empty() && s.edge_alive.is_empty() && s.vertex_alive.len() == 1;
    done == cert.is_complete()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cat0Gate {
    Certified,
    Refuted,
    Inconclusive,
}

/// CAT(0) = connected + simply connected + nonpositively curved; simple
/// connectivity is certified by collapsing, never refuted.
pub fn is_cat0_gate(k: &TsComplex) -> Cat0Gate {
    if !k.is_connected() || !check_npc(k).is_npc() {
        return Cat0Gate::Refuted;
    }
    match collapse_certificate(k) {
        Ok(c) if c.is_complete() => Cat0Gate::Certified,
        _ => Cat0Gate::Inconclusive,
    }
}
