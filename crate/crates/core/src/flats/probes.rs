//! Sampled probes of Gersten-Short geodesics inside flat windows.

use std::collections::{BTreeMap, VecDeque};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::project::embed;
use super::torus::lattice_coords;
use super::FlatWindow;
use crate::complex::VertexId;
use crate::error::{Result, TsqError};
use crate::exact::{segments_cross, EPoint, ProductPoint};
use crate::intervals::{
    choke_chain, family_subspace_max, family_sync_max, first_move, first_move_from_labels, initial_link, interval,
    ChokeStep,
};
use num_bigint::BigUint;

/// Vertices within `r` of `v`, ascending.
fn ball(flat: &FlatWindow, v: VertexId, r: u32) -> Vec<VertexId> {
    let k = &flat.complex;
    let mut dist: BTreeMap<usize, u32> = BTreeMap::new();
    let s = k.vertex_index(v).unwrap();
    dist.insert(s, 0);
    let mut queue = VecDeque::from([s]);
    while let Some(i) = queue.pop_front() {
        let d = dist[&i];
        if d == r {
            continue;
        }
        for &j in k.heads_at(i) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(j) {
                e.insert(d + 1);
                queue.push_back(j);
            }
        }
    }
    let mut out: Vec<VertexId> = dist.keys().map(|&i| k.vertex_at(i)).collect();
    out.sort();
    out
}

/// Draws `(u, v, x, y)` with `x, y` within `sep` of `u, v`, and with every
/// distance involved small enough to be read faithfully in the window.
pub fn sample_pair<R: Rng>(flat: &FlatWindow, sep: u32, rng: &mut R) -> Result<(VertexId, VertexId, VertexId, VertexId)> {
    let starts = flat.deep_vertices(3 * sep + 2);
    let &u = starts.choose(rng).ok_or_else(|| TsqError::Flat("window too small to sample".into()))?;
    let reach = flat.margin(u) - 3 * sep;
    let v = *ball(flat, u, reach).choose(rng).unwrap();
    let x = *ball(flat, u, sep).choose(rng).unwrap();
    let y = *ball(flat, v, sep).choose(rng).unwrap();
    Ok((u, v, x, y))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FtRow {
    pub window_radius: i64,
    pub separation: u32,
    pub sample_id: usize,
    pub k_sync: u32,
    pub k_subspace: u32,
}

/// For each sample, the worst synchronous and subspace distances between
/// a Gersten-Short geodesic from `u` to `v` and one from `x` to `y`.
pub fn ft_probe<R: Rng>(flat: &FlatWindow, sep: u32, samples: usize, rng: &mut R) -> Result<Vec<FtRow>> {
    let k = &flat.complex;
    let mut rows = Vec::with_capacity(samples);
    for sample_id in 0..samples {
        let (u, v, x, y) = sample_pair(flat, sep, rng)?;
        let a = choke_chain(k, u, v)?;
        let b = choke_chain(k, x, y)?;
        rows.push(FtRow {
            window_radius: flat.window.radius(),
            separation: sep,
            sample_id,
            k_sync: family_sync_max(k, &a, &b),
            k_subspace: family_subspace_max(k, &a, &b),
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub u: VertexId,
    pub v: VertexId,
    pub actual: ChokeStep,
    pub predicted: Option<ChokeStep>,
    /// Whether the neighbours of `u` whose images lie in the product
    /// interval span the same initial cell as the true interval.
    pub same_initial_cell: bool,
    pub agree: bool,
}

/// Recomputes the first move from `u` toward `v` using only product
/// distances in ℰ × ℰ, and compares it with the move read off the interval.
pub fn next_move_locality_check(flat: &FlatWindow, u: VertexId, v: VertexId) -> Result<LocalityReport> {
    let k = &flat.complex;
    let iv = interval(k, u, v)?;
    let actual = first_move(&iv)?;
    let actual_link = initial_link(&iv)?;
    let emb = embed(flat)?;
    let (pu, pv) = (emb[&u], emb[&v]);
    let du = k.vertices().iter().map(|w| Some(emb[w].dist(pu) as u32)).collect();
    let dv = k.vertices().iter().map(|w| Some(emb[w].dist(pv) as u32)).collect();
    let predicted = first_move_from_labels(k, u, pu.dist(pv) as u32, du, dv).ok();
    let same_initial_cell = predicted.as_ref().is_some_and(|(l, _)| *l == actual_link);
    let predicted = predicted.map(|(_, s)| s);
    let agree = same_initial_cell && predicted.as_ref() == Some(&actual);
    Ok(LocalityReport { u, v, actual, predicted, same_initial_cell, agree })
}

/// A first-move descriptor that survives translation: the kind and the
/// displacement to the next choke point.
pub fn move_descriptor(flat: &FlatWindow, step: &ChokeStep) -> (crate::intervals::StepKind, crate::exact::Point) {
    (step.kind, flat.coord(step.to) - flat.coord(step.from))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoncrossingReport {
    pub first: (VertexId, VertexId),
    pub second: (VertexId, VertexId),
    pub crossing: bool,
}

/// Whether the straight chord from `u` to its next choke point toward `v`
/// crosses the chord from `x` to its next choke point toward `y`.
pub fn noncrossing_check(flat: &FlatWindow, u: VertexId, v: VertexId, x: VertexId, y: VertexId) -> Result<NoncrossingReport> {
    let k = &flat.complex;
    let next = |a: VertexId, b: VertexId| -> Result<VertexId> {
        if a == b {
            return Ok(a);
        }
        Ok(first_move(&interval(k, a, b)?)?.to)
    };
    let (cu, cx) = (next(u, v)?, next(x, y)?);
    let c = |w| flat.coord(w);
    let crossing = segments_cross(c(u), c(cu), c(x), c(cx));
    Ok(NoncrossingReport { first: (u, cu), second: (x, cx), crossing })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearityReport {
    pub u: VertexId,
    pub v: VertexId,
    pub length: usize,
    /// Index along the path where the remaining product interval first
    /// drops dimension.
    pub split: usize,
    /// Whether two choke points in one translation orbit were found before
    /// the split; otherwise the direction is the chord to the split point.
    pub period_found: bool,
    pub direction: [i64; 4],
    pub deviation_squared: Ratio<i128>,
    pub deviation: f64,
}

fn plane_dim(a: EPoint, b: EPoint) -> u32 {
    let d = b - a;
    if d == EPoint::ZERO {
        0
    } else if d.p == 0 || d.q == 0 || d.p == -d.q {
        1
    } else {
        2
    }
}

fn interval_dim(a: ProductPoint, b: ProductPoint) -> u32 {
    plane_dim(a.b, b.b) + plane_dim(a.r, b.r)
}

fn z4(p: ProductPoint) -> [i128; 4] {
    [p.b.p as i128, p.b.q as i128, p.r.p as i128, p.r.q as i128]
}

fn dot2(x: [i128; 4], y: [i128; 4]) -> i128 {
    let plane = |a: i128, b: i128, c: i128, d: i128| 2 * a * c + a * d + b * c + 2 * b * d;
    plane(x[0], x[1], y[0], y[1]) + plane(x[2], x[3], y[2], y[3])
}

fn minus(a: [i128; 4], b: [i128; 4]) -> [i128; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// Distance in ℰ × ℰ from the image of a Gersten-Short geodesic to a
/// straight line through the image of `u`, up to the point where the
/// remaining product interval degenerates.
pub fn rough_linearity_check(flat: &FlatWindow, u: VertexId, v: VertexId) -> Result<LinearityReport> {
    linearity_with(flat, &embed(flat)?, u, v)
}

/// The worst linearity report over all pairs `(u, v)` where `u` is the
/// vertex nearest the centre in its translation orbit and `v` lies within
/// the margin of `u`.
pub fn rough_linearity_sweep(flat: &FlatWindow) -> Result<LinearityReport> {
    let [t1, t2] = flat.translations.ok_or_else(|| TsqError::Flat("window has no period lattice".into()))?;
    let emb = embed(flat)?;
    let mut by_norm: Vec<VertexId> = flat.complex.vertices().to_vec();
    by_norm.sort_by_key(|&v| (flat.coord(v).norm4(), v));
    let mut reps: Vec<VertexId> = Vec::new();
    for v in by_norm {
        if !reps.iter().any(|&r| lattice_coords(flat.coord(v) - flat.coord(r), t1, t2).is_some()) {
            reps.push(v);
        }
    }
    let mut worst: Option<LinearityReport> = None;
    for u in reps {
        for v in ball(flat, u, flat.margin(u)) {
            if v == u {
                continue;
            }
            let rep = linearity_with(flat, &emb, u, v)?;
            if worst.as_ref().is_none_or(|w| rep.deviation_squared > w.deviation_squared) {
                worst = Some(rep);
            }
        }
    }
    worst.ok_or_else(|| TsqError::Flat("window is too small for a sweep".into()))
}

fn linearity_with(flat: &FlatWindow, emb: &BTreeMap<VertexId, ProductPoint>, u: VertexId, v: VertexId) -> Result<LinearityReport> {
    let [t1, t2] = flat.translations.ok_or_else(|| TsqError::Flat("window has no period lattice".into()))?;
    let k = &flat.complex;
    let chain = choke_chain(k, u, v)?;
    let path = chain.path(&BigUint::ZERO);
    let pv = emb[&v];
    let full = interval_dim(emb[&u], pv);
    let split = path.vertices.iter().position(|w| interval_dim(emb[w], pv) < full).unwrap_or(path.vertices.len() - 1);
    let mut dir = None;
    'outer: for (i, &a) in chain.vertices.iter().enumerate() {
        if path.vertices.iter().position(|&w| w == a).unwrap() > split {
            break;
        }
        for &b in &chain.vertices[i + 1..] {
            if path.vertices.iter().position(|&w| w == b).unwrap() > split {
                break;
            }
            if lattice_coords(flat.coord(b) - flat.coord(a), t1, t2).is_some() {
                dir = Some(minus(z4(emb[&b]), z4(emb[&a])));
                break 'outer;
            }
        }
    }
    let z0 = z4(emb[&u]);
    let period_found = dir.is_some();
    let d = dir.unwrap_or_else(|| minus(z4(emb[&path.vertices[split]]), z0));
    let dd = dot2(d, d);
    let mut worst = Ratio::from_integer(0);
    for w in &path.vertices[..=split] {
        let r = minus(z4(emb[w]), z0);
        let dev = if dd == 0 {
            Ratio::new(dot2(r, r), 2)
        } else {
            let rd = dot2(r, d);
            Ratio::new(dot2(r, r) * dd - rd * rd, 2 * dd)
        };
        worst = worst.max(dev);
    }
    let deviation = (*worst.numer() as f64 / *worst.denom() as f64).sqrt();
    Ok(LinearityReport {
        u,
        v,
        length: path.len(),
        split,
        period_found,
        direction: d.map(|x| x as i64),
        deviation_squared: worst,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellKind;
    use crate::exact::{Point, Rt3};
    use crate::flats::{develop_torus, gen_gaussian, gen_radial_y, gen_striped, snub_torus};
    use crate::intervals::StepKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn at(f: &FlatWindow, x: i64, y: i64) -> VertexId {
        f.vertex_at(Point::new(Rt3::int(x), Rt3::int(y))).unwrap()
    }

    #[test]
    fn gaussian_first_move_is_local() {
        let f = gen_gaussian(6).unwrap();
        let rep = next_move_locality_check(&f, at(&f, 0, 0), at(&f, 3, 2)).unwrap();
        assert!(rep.agree);
        assert_eq!(rep.actual.kind, StepKind::Square);
        let aligned = next_move_locality_check(&f, at(&f, 0, 0), at(&f, 4, 0)).unwrap();
        assert_eq!(aligned.actual.kind, StepKind::Edge);
        assert!(aligned.agree);
    }

    #[test]
    fn locality_on_the_snub_flat() {
        let f = develop_torus(&snub_torus(), 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let (u, v, _, _) = sample_pair(&f, 1, &mut rng).unwrap();
            if u == v {
                continue;
            }
            let rep = next_move_locality_check(&f, u, v).unwrap();
            assert!(rep.agree, "{u} -> {v}");
        }
    }

    #[test]
    fn translated_pairs_share_descriptors() {
        let f = develop_torus(&snub_torus(), 12).unwrap();
        let [t1, _] = f.translations.unwrap();
        let u = f.center();
        let v = f.deep_vertices(6)[3];
        let (u2, v2) = (f.vertex_at(f.coord(u) + t1).unwrap(), f.vertex_at(f.coord(v) + t1).unwrap());
        let a = next_move_locality_check(&f, u, v).unwrap();
        let b = next_move_locality_check(&f, u2, v2).unwrap();
        assert_eq!(move_descriptor(&f, &a.actual), move_descriptor(&f, &b.actual));
    }

    #[test]
    fn parallel_chords_do_not_cross() {
        let f = gen_gaussian(6).unwrap();
        let rep = noncrossing_check(&f, at(&f, 0, 0), at(&f, 4, 4), at(&f, 1, 0), at(&f, 5, 4)).unwrap();
        assert!(!rep.crossing);
        let same = noncrossing_check(&f, at(&f, 0, 0), at(&f, 4, 4), at(&f, 0, 0), at(&f, 4, 3)).unwrap();
        assert!(!same.crossing);
    }

    #[test]
    fn pure_linearity() {
        let f = gen_gaussian(12).unwrap();
        let rep = rough_linearity_check(&f, at(&f, -6, -5), at(&f, 7, 9)).unwrap();
        assert!(rep.deviation <= 1.0, "{rep:?}");
        assert!(rep.period_found);
    }

    #[test]
    fn ft_rows_are_reproducible() {
        let f = gen_striped(&[(CellKind::Square, 1), (CellKind::Triangle, 1)], 8).unwrap();
        let a = ft_probe(&f, 1, 5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = ft_probe(&f, 1, 5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn radial_families_drift_apart() {
        let mut last = 0;
        for arm in [2, 4] {
            let f = gen_radial_y(arm, [1, 1, 1]).unwrap();
            let ((u1, v1), (u2, v2)) = crate::flats::radial_y_probe_points(&f, arm).unwrap();
            let a = choke_chain(&f.complex, u1, v1).unwrap();
            let b = choke_chain(&f.complex, u2, v2).unwrap();
            let d = family_subspace_max(&f.complex, &a, &b);
            assert!(d > last, "arm {arm}: {d}");
            last = d;
        }
    }
}
