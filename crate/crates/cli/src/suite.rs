//! The acceptance suite behind `tsq reproduce`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tsq_core::catalog;
use tsq_core::curvature::{is_cat0_gate, Cat0Gate};
use tsq_core::diagram::random_disc;
use tsq_core::flats::{
    develop_torus, embed, ft_probe, gen_eisenstein, gen_gaussian, gen_radial_y, gen_striped, interval_image_check,
    move_descriptor, next_move_locality_check, noncrossing_check, quasi_flat, radial_y_probe_points,
    rough_linearity_sweep, sample_pair, snub_torus,
};
use tsq_core::intervals::{family_subspace_max, first_move, gs_one_ft_check, initial_link, interval_cat0_check, interval_edge_check};
use tsq_core::metric::ft_geo_bound_check;
use tsq_core::moves::geodesic_move_graph;
use tsq_core::{
    check_npc, choke_chain, curvature_ledger, distance, enumerate_geodesics, gs_geodesics, interval, straighten, Cell,
    CellKind, FlatWindow, Point, Rt3,
};

use crate::manifest::RunManifest;
use crate::sampling::{any_pairs, near_pair, random_walk};

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Criterion ids to run; all when empty.
    pub only: Vec<u8>,
    /// Corrupt the Gaussian generator to check that the suite notices.
    pub tamper: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub measured: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {:>2} {verdict} {}: {}", self.id, self.name, self.measured)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub version: String,
    pub tamper: bool,
    pub criteria: Vec<CriterionResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            writeln!(s, "{}", c.line()).unwrap();
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        writeln!(s, "{passed}/{} criteria passed", self.criteria.len()).unwrap();
        s
    }
}

struct Fixtures {
    tamper: bool,
}

impl Fixtures {
    /// The Gaussian window, or with `tamper` a copy carrying a second square
    /// glued over the one at the origin.
    fn gaussian(&self, radius: i64) -> tsq_core::Result<FlatWindow> {
        let f = gen_gaussian(radius)?;
        if !self.tamper {
            return Ok(f);
        }
        let mut data = f.complex.to_data();
        let o = f.vertex_at(Point::ORIGIN).expect("origin is in the window");
        let c = f.complex.cells().iter().find(|c| f.complex.cell_cycle(c).contains(&o)).unwrap();
        let id = data.cells.iter().map(|c| c.id).max().unwrap() + 1;
        data.cells.push(Cell { id, kind: c.kind, boundary: c.boundary.clone() });
        let k = tsq_core::TsComplex::new(data)?;
        Ok(FlatWindow::new(k, f.coords.clone(), f.window, f.translations))
    }

    fn striped(&self, radius: i64) -> tsq_core::Result<FlatWindow> {
        gen_striped(&[(CellKind::Square, 1), (CellKind::Triangle, 1)], radius)
    }

    fn snub(&self, radius: i64) -> tsq_core::Result<FlatWindow> {
        develop_torus(&snub_torus(), radius)
    }

    /// Gaussian, Eisenstein, striped and crumpled windows.
    fn four(&self, radius: i64) -> tsq_core::Result<Vec<(&'static str, FlatWindow)>> {
        Ok(vec![
            ("gaussian", self.gaussian(radius)?),
            ("eisenstein", gen_eisenstein(radius)?),
            ("striped", self.striped(radius)?),
            ("snub", self.snub(radius)?),
        ])
    }
}

const NONCROSSING_SAMPLES: usize = 1000;

type Check = fn(&Fixtures, &mut ChaCha8Rng) -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, Check); 12] = [
    (1, "npc verdicts", npc_verdicts),
    (2, "gauss-bonnet", gauss_bonnet),
    (3, "straightening", straightening),
    (4, "gersten-short structure", gs_structure),
    (5, "interval health", interval_health),
    (6, "pure-flat fellow travel", pure_ft),
    (7, "striped-flat fellow travel", striped_ft),
    (8, "radial divergence", radial_divergence),
    (9, "embedding", embedding),
    (10, "product intervals", product_intervals),
    (11, "periodic-flat analysis", periodic_analysis),
    (12, "metric bound", metric_bound),
];

pub fn criterion_names() -> Vec<(u8, &'static str)> {
    CRITERIA.iter().map(|&(id, name, _)| (id, name)).collect()
}

pub fn run_one(cfg: &SuiteConfig, id: u8) -> Option<CriterionResult> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let fx = Fixtures { tamper: cfg.tamper };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let (passed, measured) = match catch_unwind(AssertUnwindSafe(|| check(&fx, &mut rng))) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => (false, format!("error: {e:#}")),
        Err(p) => {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panic: {}", msg.unwrap_or_default()))
        }
    };
    Some(CriterionResult { id, name: name.to_string(), passed, measured })
}

pub fn run(cfg: &SuiteConfig) -> Report {
    let criteria = CRITERIA
        .iter()
        .filter(|c| cfg.only.is_empty() || cfg.only.contains(&c.0))
        .filter_map(|c| run_one(cfg, c.0))
        .collect();
    Report { seed: cfg.seed, version: env!("CARGO_PKG_VERSION").to_string(), tamper: cfg.tamper, criteria }
}

/// Writes `report.json`, `report.txt` and `manifest.json` into `out`.
pub fn write_report(report: &Report, out: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let json = out.join("report.json");
    let txt = out.join("report.txt");
    std::fs::write(&json, serde_json::to_string_pretty(report)? + "\n")?;
    std::fs::write(&txt, report.table())?;
    let mut argv = vec!["tsq".to_string(), "reproduce".to_string()];
    if report.tamper {
        argv.push("--tamper".into());
    }
    let mut m = RunManifest::new(argv, report.seed);
    m.output(&json)?;
    m.output(&txt)?;
    let manifest = out.join("manifest.json");
    m.write(&manifest)?;
    Ok(vec![json, txt, manifest])
}

fn npc_verdicts(fx: &Fixtures, _: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let cube = check_npc(&catalog::cube_corner());
    let weight = cube.witness.as_ref().map(|w| w.weight);
    let torus = check_npc(&catalog::square_torus()).is_npc();
    let eis = check_npc(&gen_eisenstein(10)?.complex).is_npc();
    let gau = check_npc(&fx.gaussian(10)?.complex).is_npc();
    let ok = !cube.is_npc() && weight == Some(9) && torus && eis && gau;
    let w = weight.map_or("none".to_string(), |w| format!("{w}/12 of 2π"));
    Ok((ok, format!("cube corner not npc, witness {w}; square torus npc={torus}; eisenstein npc={eis}; gaussian npc={gau}")))
}

fn gauss_bonnet(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let flats = [fx.gaussian(5)?,
        gen_eisenstein(5)?,
        fx.striped(6)?,
        gen_radial_y(2, [1, 1, 1])?,
        fx.snub(6)?];
    let (mut diagrams, mut identity_fail, mut certified, mut bound_fail) = (0, 0, 0, 0);
    let mut tries = 0;
    while diagrams < 200 && tries < 2000 {
        tries += 1;
        let f = &flats[tries % flats.len()];
        let size = rng.gen_range(1..=40);
        let Some(d) = random_disc(&f.complex, &f.coord_map(), size, rng) else { continue };
        diagrams += 1;
        let l = curvature_ledger(&d);
        if !l.identity_holds || l.total != 12 * l.euler {
            identity_fail += 1;
        }
        if is_cat0_gate(d.complex()) == Cat0Gate::Certified {
            certified += 1;
            if l.boundary_total < 12 {
                bound_fail += 1;
            }
        }
    }
    let ok = diagrams == 200 && identity_fail == 0 && bound_fail == 0 && certified > 0;
    Ok((
        ok,
        format!("{diagrams} diagrams, {identity_fail} identity failures; {certified} certified discs, {bound_fail} below a full turn"),
    ))
}

fn straightening(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (mut walks, mut bad_walks, mut graphs, mut bad_graphs) = (0, 0, 0, 0);
    let mut first_bad = String::new();
    for (name, f) in fx.four(16)? {
        let k = &f.complex;
        for _ in 0..100 {
            let walk = random_walk(&f, rng.gen_range(0..=12), rng)?;
            walks += 1;
            let good = straighten(k, &walk).and_then(|s| {
                let d = distance(k, walk.start(), walk.end())? as usize;
                Ok(s.geodesic.len() == d && s.replay()? == s.geodesic)
            });
            if !matches!(good, Ok(true)) {
                bad_walks += 1;
                if first_bad.is_empty() {
                    first_bad = format!(" (first: {name} {walk})");
                }
            }
        }
        for _ in 0..50 {
            let (u, v) = near_pair(&f, 6, rng)?;
            graphs += 1;
            if !matches!(geodesic_move_graph(k, u, v, 5000).map(|g| g.connected), Ok(true)) {
                bad_graphs += 1;
            }
        }
    }
    Ok((
        bad_walks == 0 && bad_graphs == 0,
        format!("{walks} walks, {bad_walks} not straightened to BFS length{first_bad}; {graphs} move graphs, {bad_graphs} disconnected"),
    ))
}

fn gs_structure(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (mut sampled, mut link_bad, mut count_bad) = (0, 0, 0);
    let (mut max_sync, mut over_one, mut adjacent) = (0, 0, true);
    for (_, f) in fx.four(12)? {
        let k = &f.complex;
        let mut n = 0;
        while n < 25 {
            let (u, v) = near_pair(&f, 8, rng)?;
            if u == v {
                continue;
            }
            let iv = interval(k, u, v)?;
            if !interval_cat0_check(&iv).ok() {
                continue;
            }
            n += 1;
            sampled += 1;
            if initial_link(&iv).is_err() {
                link_bad += 1;
            }
            let fam = gs_geodesics(k, u, v, 1 << 12)?;
            let d = iv.length as usize;
            let distinct: BTreeSet<_> = fam.paths.iter().collect();
            let good = !fam.overflow
                && fam.paths.len() == 1usize << fam.chain.move_steps()
                && distinct.len() == fam.paths.len()
                && fam.paths.iter().all(|p| p.len() == d);
            if !good {
                count_bad += 1;
            }
            let ft = gs_one_ft_check(k, u, v)?;
            max_sync = max_sync.max(ft.max_sync);
            if ft.max_sync > 1 {
                over_one += 1;
            }
            adjacent &= ft.cell_adjacent;
        }
    }
    let g = fx.gaussian(6)?;
    let at = |x: i64, y: i64| g.vertex_at(Point::new(Rt3::new(2 * x, 0), Rt3::new(2 * y, 0))).unwrap();
    let chain = choke_chain(&g.complex, at(0, 0), at(3, 2))?;
    let oracle = chain.vertices == vec![at(0, 0), at(1, 1), at(2, 2), at(3, 2)] && chain.count().to_string() == "4";
    let ok = link_bad == 0 && count_bad == 0 && max_sync <= 1 && oracle;
    Ok((
        ok,
        format!(
            "{sampled} certified intervals: initial link arity > 2 in {link_bad}, count != 2^moves in {count_bad}; \
             max GS-pair sync {max_sync} (families above 1: {over_one}; simultaneous points share a cell: {adjacent}); \
             gaussian (0,0)->(3,2) chain oracle {}",
            if oracle { "ok" } else { "wrong" }
        ),
    ))
}

fn interval_health(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (mut n, mut cat0_bad, mut edge_bad) = (0, 0, 0);
    let (mut vertical, mut horizontal) = (0, 0);
    for (_, f) in fx.four(12)? {
        for _ in 0..25 {
            let (u, v) = near_pair(&f, 8, rng)?;
            let iv = interval(&f.complex, u, v)?;
            n += 1;
            if !interval_cat0_check(&iv).ok() {
                cat0_bad += 1;
            }
            let e = interval_edge_check(&iv);
            vertical += e.vertical;
            horizontal += e.horizontal;
            if !e.ok() {
                edge_bad += 1;
            }
        }
    }
    Ok((
        cat0_bad == 0 && edge_bad == 0,
        format!(
            "{n} intervals: {cat0_bad} fail npc or collapse; {edge_bad} with bad edges ({vertical} vertical, {horizontal} horizontal checked)"
        ),
    ))
}

fn max_sync(f: &FlatWindow, samples: usize, rng: &mut ChaCha8Rng) -> Result<u32> {
    Ok(ft_probe(f, 1, samples, rng)?.iter().map(|r| r.k_sync).max().unwrap_or(0))
}

fn pure_ft(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let g = max_sync(&fx.gaussian(20)?, 200, rng)?;
    let e = max_sync(&gen_eisenstein(20)?, 200, rng)?;
    Ok((g <= 3 && e <= 3 && g.max(e) <= 7, format!("max sync k at radius 20: gaussian {g}, eisenstein {e} (bounds 3 and 7)")))
}

fn striped_ft(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let a = max_sync(&fx.striped(20)?, 200, rng)?;
    let b = max_sync(&fx.striped(40)?, 200, rng)?;
    Ok((a == b, format!("striped (S1,T1) max sync k: {a} at radius 20, {b} at radius 40")))
}

fn radial_divergence(_: &Fixtures, _: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut ks = Vec::new();
    for arm in [4u32, 8, 16] {
        let f = gen_radial_y(arm, [1, 1, 1])?;
        let ((u1, v1), (u2, v2)) = radial_y_probe_points(&f, arm)?;
        let a = choke_chain(&f.complex, u1, v1)?;
        let b = choke_chain(&f.complex, u2, v2)?;
        ks.push(family_subspace_max(&f.complex, &a, &b));
    }
    let ok = ks.windows(2).all(|w| w[0] < w[1]) && ks[2] > 4;
    Ok((ok, format!("max subspace distance at arms 4, 8, 16: {}, {}, {}", ks[0], ks[1], ks[2])))
}

fn embedding(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, f) in fx.four(12)? {
        let emb = embed(&f)?;
        let collisions = any_pairs(&f, 500, rng).iter().filter(|(u, v)| emb[u] == emb[v]).count();
        let deep = f.deep_vertices(1);
        let (mut checked, mut bad, mut tries) = (0, 0, 0);
        while checked < 200 && tries < 20_000 {
            tries += 1;
            let (u, v) = (*deep.choose(rng).unwrap(), *deep.choose(rng).unwrap());
            let d = distance(&f.complex, u, v)?;
            if f.margin(u).max(f.margin(v)) < d {
                continue;
            }
            checked += 1;
            if emb[&u].b.dist(emb[&v].b) + emb[&u].r.dist(emb[&v].r) != d as i64 {
                bad += 1;
            }
        }
        ok &= collisions == 0 && bad == 0 && checked == 200;
        parts.push(format!("{name}: {collisions} collisions in 500, {bad} of {checked} non-additive"));
    }
    Ok((ok, parts.join("; ")))
}

fn product_intervals(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, f) in [("snub", fx.snub(10)?), ("striped", fx.striped(10)?)] {
        let mut bad = 0;
        for _ in 0..50 {
            let (u, v) = near_pair(&f, 6, rng)?;
            if !interval_image_check(&f, u, v)?.equal {
                bad += 1;
            }
        }
        ok &= bad == 0;
        parts.push(format!("{name}: {bad} of 50 images differ from the product interval"));
    }
    Ok((ok, parts.join("; ")))
}

fn periodic_analysis(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (s20, s40) = (fx.snub(20)?, fx.snub(40)?);
    let (q20, q40) = (quasi_flat(&s20)?, quasi_flat(&s40)?);
    let (t20, t40) = (quasi_flat(&fx.striped(20)?)?, quasi_flat(&fx.striped(40)?)?);
    let quasi_ok = q20.c_squared == q40.c_squared && t20.c_squared == t40.c_squared;

    // Every pair from one vertex per translation orbit, at both radii.
    let dev = [rough_linearity_sweep(&s20)?, rough_linearity_sweep(&s40)?].map(|r| (r.deviation_squared, r.length));
    let lin_ok = dev[0].0 == dev[1].0;

    let t1 = s20.translations.unwrap()[0];
    let (mut local_bad, mut shifted, mut shift_bad, mut crossings) = (0, 0, 0, 0);
    let mut drawn = 0;
    while drawn < 100 {
        let (u, v, x, y) = sample_pair(&s20, 1, rng)?;
        if u == v {
            continue;
        }
        drawn += 1;
        if !next_move_locality_check(&s20, u, v)?.agree {
            local_bad += 1;
        }
        if noncrossing_check(&s20, u, v, x, y)?.crossing {
            crossings += 1;
        }
        let moved = s20.vertex_at(s20.coord(u) + t1).zip(s20.vertex_at(s20.coord(v) + t1));
        // The translated pair needs the same room around it.
        let d = distance(&s20.complex, u, v)?;
        if let Some((u2, v2)) = moved.filter(|&(a, _)| s20.margin(a) > d) {
            shifted += 1;
            let a = first_move(&interval(&s20.complex, u, v)?)?;
            let b = first_move(&interval(&s20.complex, u2, v2)?)?;
            if move_descriptor(&s20, &a) != move_descriptor(&s20, &b) {
                shift_bad += 1;
            }
        }
    }
    // A crossing shows up in roughly one configuration in sixty, so 100
    // draws miss it for some seeds; keep going to 1000.
    let first_hundred = crossings;
    while drawn < NONCROSSING_SAMPLES {
        let (u, v, x, y) = sample_pair(&s20, 1, rng)?;
        if u == v {
            continue;
        }
        drawn += 1;
        if noncrossing_check(&s20, u, v, x, y)?.crossing {
            crossings += 1;
        }
    }
    let k20 = max_sync(&s20, 200, rng)?;
    let k40 = max_sync(&s40, 200, rng)?;
    let ok = quasi_ok && lin_ok && local_bad == 0 && shift_bad == 0 && crossings == 0 && k20 == k40;
    Ok((
        ok,
        format!(
            "snub c² {} at r20, {} at r40 (striped {} / {}); max linearity deviation² {} at r20 (pair length {}), {} at r40 (pair length {}); \
             next-move locality {local_bad} of 100 disagree, translated descriptors {shift_bad} of {shifted} differ; \
             noncrossing {first_hundred} of the first 100 and {crossings} of {NONCROSSING_SAMPLES} cross; ft k {k20} at r20, {k40} at r40",
            q20.c_squared, q40.c_squared, t20.c_squared, t40.c_squared, dev[0].0, dev[0].1, dev[1].0, dev[1].1
        ),
    ))
}

fn metric_bound(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut windows = fx.four(12)?;
    windows.push(("radial", gen_radial_y(4, [1, 1, 1])?));
    let (mut n, mut bad, mut worst) = (0, 0, (0, 0));
    for (_, f) in &windows {
        let k = &f.complex;
        for _ in 0..100 {
            let (u, v) = near_pair(f, 8, rng)?;
            let nudge = |w, rng: &mut ChaCha8Rng| -> Result<tsq_core::VertexId> {
                let mut w = w;
                for _ in 0..rng.gen_range(0..=2) {
                    let d = *k.out_darts(w).choose(rng).unwrap();
                    w = k.head(d);
                }
                Ok(w)
            };
            let (x, y) = (nudge(u, rng)?, nudge(v, rng)?);
            let pick = |a, b, rng: &mut ChaCha8Rng| -> Result<tsq_core::PathSeq> {
                let list = enumerate_geodesics(k, a, b, 256)?;
                Ok(list.paths.choose(rng).unwrap().clone())
            };
            let (p1, p2) = (pick(u, v, rng)?, pick(x, y, rng)?);
            let r = ft_geo_bound_check(k, &p1, &p2)?;
            n += 1;
            if !r.holds {
                bad += 1;
            }
            if r.sync > worst.0 {
                worst = (r.sync, r.bound);
            }
        }
    }
    Ok((bad == 0, format!("{n} geodesic pairs, {bad} exceed 2k+ℓ; largest sync {} (bound {})", worst.0, worst.1)))
}
