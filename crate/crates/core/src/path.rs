//! Combinatorial edge paths.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Dart, TsComplex, VertexId};
use crate::error::{Result, TsqError};

/// Alternating vertex/dart sequence; `vertices.len() == darts.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathSeq {
    pub vertices: Vec<VertexId>,
    pub darts: Vec<Dart>,
}

impl PathSeq {
    pub fn trivial(v: VertexId) -> Self {
        PathSeq { vertices: vec![v], darts: Vec::new() }
    }

    pub fn from_darts(k: &TsComplex, start: VertexId, darts: Vec<Dart>) -> Result<Self> {
        k.check_vertex(start)?;
        let mut vertices = Vec::with_capacity(darts.len() + 1);
        vertices.push(start);
        let mut at = start;
        for &d in &darts {
            if !k.has_dart(d) {
                return Err(TsqError::UnknownEdge(d.edge));
            }
            if k.tail(d) != at {
                return Err(TsqError::BadPath(format!("{d} does not leave v{at}")));
            }
            at = k.head(d);
            vertices.push(at);
        }
        Ok(PathSeq { vertices, darts })
    }

    /// Builds a path through a vertex sequence, taking the smallest dart
    /// between consecutive vertices.
    pub fn through(k: &TsComplex, vertices: &[VertexId]) -> Result<Self> {
        let (&start, rest) = vertices.split_first().ok_or_else(|| TsqError::BadPath("empty path".into()))?;
        let mut darts = Vec::with_capacity(rest.len());
        let mut at = start;
        for &w in rest {
            k.check_vertex(w)?;
            let d = k
                .out_darts(at)
                .iter()
                .copied()
                .find(|&d| k.head(d) == w)
                .ok_or_else(|| TsqError::BadPath(format!("v{at} and v{w} are not adjacent")))?;
            darts.push(d);
            at = w;
        }
        PathSeq::from_darts(k, start, darts)
    }

    /// Parses `v0,e3,v7,e4',v2`. A primed edge is traversed against its
    /// stored orientation; unprimed edges may go either way and are resolved
    /// from the neighbouring vertices.
    pub fn parse(k: &TsComplex, s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
        if tokens.len().is_multiple_of(2) {
            return Err(TsqError::BadPath("expected v,e,v,...,v".into()));
        }
        let vertex = |t: &str| -> Result<VertexId> {
            t.strip_prefix('v')
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| TsqError::BadPath(format!("bad vertex token {t:?}")))
        };
        let mut vertices = vec![vertex(tokens[0])?];
        let mut darts = Vec::new();
        for pair in tokens[1..].chunks(2) {
            let (et, vt) = (pair[0], pair[1]);
            let primed = et.ends_with('\'');
            let id: u32 = et
                .trim_end_matches('\'')
                .strip_prefix('e')
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| TsqError::BadPath(format!("bad edge token {et:?}")))?;
            let edge = k.edge(id).ok_or(TsqError::UnknownEdge(id))?;
            let from = *vertices.last().unwrap();
            let to = vertex(vt)?;
            let forward = edge.ends == [from, to];
            let backward = edge.ends == [to, from];
            let reversed = match (primed, forward, backward) {
                (true, _, true) => true,
                (false, true, _) => false,
                (false, false, true) => true,
                _ => return Err(TsqError::BadPath(format!("{et} does not join v{from} to v{to}"))),
            };
            darts.push(Dart::new(id, reversed));
            vertices.push(to);
        }
        let p = PathSeq::from_darts(k, vertices[0], darts)?;
        if p.vertices != vertices {
            return Err(TsqError::BadPath("vertex sequence does not match darts".into()));
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    /// Position at integer time `t`, clamped to the end.
    pub fn at(&self, t: usize) -> VertexId {
        self.vertices[t.min(self.darts.len())]
    }

    pub fn reversed(&self) -> Self {
        PathSeq {
            vertices: self.vertices.iter().rev().copied().collect(),
            darts: self.darts.iter().rev().map(|d| d.rev()).collect(),
        }
    }

    /// Darts `[from, to)` as a path.
    pub fn subpath(&self, from: usize, to: usize) -> Self {
        PathSeq { vertices: self.vertices[from..=to].to_vec(), darts: self.darts[from..to].to_vec() }
    }

    /// Replaces darts `[from, from + old_len)` by `with`, which must join the
    /// same vertices.
    pub fn splice(&self, from: usize, old_len: usize, with: &PathSeq) -> Self {
        let mut vertices = self.vertices[..from].to_vec();
        vertices.extend_from_slice(&with.vertices);
        vertices.extend_from_slice(&self.vertices[from + old_len + 1..]);
        let mut darts = self.darts[..from].to_vec();
        darts.extend_from_slice(&with.darts);
        darts.extend_from_slice(&self.darts[from + old_len..]);
        PathSeq { vertices, darts }
    }

    pub fn concat(&self, other: &PathSeq) -> Self {
        assert_eq!(self.end(), other.start());
        let mut p = self.clone();
        p.vertices.extend_from_slice(&other.vertices[1..]);
        p.darts.extend_from_slice(&other.darts);
        p
    }
}

impl fmt::Display for PathSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.vertices[0])?;
        for (d, v) in self.darts.iter().zip(&self.vertices[1..]) {
            write!(f, ",{d},v{v}")?;
        }
        Ok(())
    }
}
