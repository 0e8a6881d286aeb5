use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tsq_core::curvature::{collapse_certificate, is_cat0_gate, Cat0Gate};
use tsq_core::flats::{
    classify, coloring, embed, ft_probe, isom_embed_check, next_move_locality_check, noncrossing_check, project,
    quasi_flat, regions, rough_linearity_check, sample_pair, snub_torus,
};
use tsq_core::intervals::{first_move, initial_link, interval_cat0_check, interval_edge_check};
use tsq_core::metric::distances;
use tsq_core::{
    check_npc, curvature_ledger, distance, enumerate_geodesics, gs_geodesics, interval, straighten, CellKind, Document,
    FlatWindow, PathSeq, Recipe, TsComplex,
};

use crate::args::{Cli, Command, FlatCmd, FlatSource, GenArgs, Preset, ProbeCmd};
use crate::render::{render, Overlays};
use crate::sampling::{any_pairs, long_pair};
use crate::suite::{self, SuiteConfig};

/// What a command produced: the main artifact, files written on the side,
/// files read, and whether the checked property failed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub inputs: Vec<PathBuf>,
    pub written: Vec<PathBuf>,
    pub failed: bool,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Outcome { text: serde_json::to_string_pretty(&v).unwrap() + "\n", ..Default::default() }
    }

    fn failed_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }

    fn reading(mut self, p: &Path) -> Self {
        self.inputs.push(p.to_path_buf());
        self
    }
}

fn read_complex(p: &Path) -> Result<TsComplex> {
    Ok(Document::read(p)?.complex()?)
}

fn read_flat(p: &Path) -> Result<FlatWindow> {
    Ok(Document::read(p)?.flat()?)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn run(cli: &Cli, seed: u64) -> Result<Outcome> {
    match &cli.command {
        Command::CheckNpc { input, certificate } => {
            let k = read_complex(input)?;
            let verdict = check_npc(&k);
            let mut v = serde_json::to_value(&verdict)?;
            if *certificate {
                v["gate"] = serde_json::to_value(is_cat0_gate(&k))?;
                v["certificate"] = serde_json::to_value(collapse_certificate(&k)?)?;
            }
            Ok(Outcome::json(v).failed_if(!verdict.is_npc()).reading(input))
        }
        Command::GaussBonnet { input } => {
            let d = Document::read(input)?.diagram()?;
            let ledger = curvature_ledger(&d);
            let gate = is_cat0_gate(d.complex());
            let disc_ok = gate != Cat0Gate::Certified || ledger.boundary_total >= 12;
            let mut v = serde_json::to_value(&ledger)?;
            v["gate"] = serde_json::to_value(gate)?;
            v["disc_bound_holds"] = json!(disc_ok);
            Ok(Outcome::json(v).failed_if(!ledger.identity_holds || !disc_ok).reading(input))
        }
        Command::Dist { input, from, to } => {
            let k = read_complex(input)?;
            let v = match to {
                Some(to) => json!({ "from": from, "to": to, "distance": distance(&k, *from, *to)? }),
                None => {
                    let field = distances(&k, *from)?;
                    let all: BTreeMap<String, Option<u32>> =
                        k.vertices().iter().map(|&w| (w.to_string(), field.get(&k, w))).collect();
                    json!({ "from": from, "distances": all })
                }
            };
            Ok(Outcome::json(v).reading(input))
        }
        Command::Geodesics { input, ends, cap } => {
            let k = read_complex(input)?;
            let list = enumerate_geodesics(&k, ends.from, ends.to, *cap)?;
            let paths: Vec<String> = list.paths.iter().map(PathSeq::to_string).collect();
            let v = json!({
                "from": ends.from,
                "to": ends.to,
                "length": distance(&k, ends.from, ends.to)?,
                "count": list.count.to_string(),
                "overflow": list.overflow,
                "paths": paths,
            });
            Ok(Outcome::json(v).reading(input))
        }
        Command::Straighten { input, path, through } => {
            let k = read_complex(input)?;
            let p = match path {
                Some(s) => PathSeq::parse(&k, s)?,
                None if !through.is_empty() => PathSeq::through(&k, through)?,
                None => bail!("give the path with --path or --through"),
            };
            let s = straighten(&k, &p)?;
            let replayed = s.replay()? == s.geodesic;
            let moves: Vec<Value> = s
                .script
                .iter()
                .map(|m| {
                    let mut v = serde_json::to_value(m.kind).unwrap();
                    v["offset"] = json!(m.offset);
                    v["old"] = json!(m.old.to_string());
                    v["new"] = json!(m.new.to_string());
                    v
                })
                .collect();
            let v = json!({
                "input": p.to_string(),
                "input_length": p.len(),
                "geodesic": s.geodesic.to_string(),
                "length": s.geodesic.len(),
                "replay_matches": replayed,
                "moves": moves,
            });
            Ok(Outcome::json(v).failed_if(!replayed).reading(input))
        }
        Command::Interval { input, ends } => {
            let k = read_complex(input)?;
            let iv = interval(&k, ends.from, ends.to)?;
            let cat0 = interval_cat0_check(&iv);
            let edges = interval_edge_check(&iv);
            let labels: BTreeMap<String, (u32, u32)> = iv.labels.iter().map(|(w, l)| (w.to_string(), *l)).collect();
            let classes: BTreeMap<String, Value> =
                iv.edge_classes.iter().map(|(e, c)| (e.to_string(), serde_json::to_value(c).unwrap())).collect();
            let mut v = json!({
                "u": iv.u,
                "v": iv.v,
                "length": iv.length,
                "labels": labels,
                "edges": classes,
                "cells": iv.complex.cells().iter().map(|c| c.id).collect::<Vec<_>>(),
                "cat0": cat0,
                "edge_check": edges,
            });
            if iv.length > 0 {
                v["initial_link"] = serde_json::to_value(initial_link(&iv)?)?;
                v["first_move"] = serde_json::to_value(first_move(&iv)?)?;
            }
            Ok(Outcome::json(v).failed_if(!cat0.ok() || !edges.ok()).reading(input))
        }
        Command::Gs { input, ends, cap } => {
            let k = read_complex(input)?;
            let fam = gs_geodesics(&k, ends.from, ends.to, *cap)?;
            let v = json!({
                "from": ends.from,
                "to": ends.to,
                "choke_points": fam.chain.vertices,
                "steps": fam.chain.steps,
                "move_steps": fam.chain.move_steps(),
                "count": fam.count.to_string(),
                "overflow": fam.overflow,
                "paths": fam.paths.iter().map(PathSeq::to_string).collect::<Vec<_>>(),
            });
            Ok(Outcome::json(v).reading(input))
        }
        Command::Flat { cmd } => flat(cmd, seed),
        Command::Probe { cmd } => probe(cmd, seed),
        Command::Render { input, interval, gs, regions } => {
            let doc = Document::read(input)?;
            let svg = render(&doc, &Overlays { interval: *interval, gs: *gs, regions: *regions })?;
            Ok(Outcome { text: svg, ..Default::default() }.reading(input))
        }
        Command::Reproduce { out, only, tamper } => {
            let cfg = SuiteConfig { seed, only: only.clone(), tamper: *tamper };
            let report = suite::run(&cfg);
            let written = suite::write_report(&report, out)?;
            Ok(Outcome { text: report.table(), written, failed: !report.all_passed(), inputs: Vec::new() })
        }
    }
}

/// Parses `S1,T2,...` into alternating stripes.
pub fn parse_stripes(s: &str) -> Result<Vec<(CellKind, u32)>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let kind = match t.chars().next() {
                Some('S' | 's') => CellKind::Square,
                Some('T' | 't') => CellKind::Triangle,
                _ => bail!("stripe {t:?} should start with S or T"),
            };
            let w: u32 = t[1..].parse().with_context(|| format!("stripe width in {t:?}"))?;
            Ok((kind, w))
        })
        .collect()
}

pub fn recipe(gen: &GenArgs) -> Result<(Recipe, i64)> {
    let preset = gen.preset.context("choose a window with --preset or --flat")?;
    let mut radius = gen.radius;
    let recipe = match preset {
        Preset::Gaussian => Recipe::Gaussian,
        Preset::Eisenstein => Recipe::Eisenstein,
        Preset::Striped => Recipe::Striped { stripes: parse_stripes(gen.spec.as_deref().unwrap_or("S1,T1"))? },
        Preset::RadialY => {
            if let Some(arm) = gen.arm {
                radius = 2 * arm as i64 + 4;
            }
            let w = &gen.widths;
            Recipe::RadialY { widths: [w[0], w[1], w[2]] }
        }
        Preset::Torus => {
            let k = match &gen.torus {
                Some(p) => read_complex(p)?,
                None => snub_torus(),
            };
            Recipe::Torus { torus: k.to_data() }
        }
    };
    Ok((recipe, radius))
}

fn source(src: &FlatSource) -> Result<(FlatWindow, Vec<PathBuf>)> {
    match &src.flat {
        Some(p) => Ok((read_flat(p)?, vec![p.clone()])),
        None => {
            let (r, radius) = recipe(&src.gen)?;
            let mut inputs = Vec::new();
            if let Some(t) = &src.gen.torus {
                inputs.push(t.clone());
            }
            Ok((r.build(radius)?, inputs))
        }
    }
}

/// The source window, or the same recipe rebuilt at each radius.
fn windows(src: &FlatSource, radii: &[i64]) -> Result<(Vec<FlatWindow>, Vec<PathBuf>)> {
    let (f, inputs) = source(src)?;
    if radii.is_empty() {
        return Ok((vec![f], inputs));
    }
    let r = f.recipe.clone().context("window carries no recipe, so it cannot be regenerated")?;
    let ws = radii.iter().map(|&rad| r.build(rad)).collect::<tsq_core::Result<Vec<_>>>()?;
    Ok((ws, inputs))
}

fn flat(cmd: &FlatCmd, seed: u64) -> Result<Outcome> {
    match cmd {
        FlatCmd::Gen { gen } => {
            let (r, radius) = recipe(gen)?;
            let f = r.build(radius)?;
            let mut out = Outcome { text: Document::from_flat(&f).to_json() + "\n", ..Default::default() };
            out.inputs.extend(gen.torus.clone());
            Ok(out)
        }
        FlatCmd::Classify { input } => Ok(Outcome::json(serde_json::to_value(classify(&read_flat(input)?)?)?).reading(input)),
        FlatCmd::Regions { input } => Ok(Outcome::json(serde_json::to_value(regions(&read_flat(input)?))?).reading(input)),
        FlatCmd::Color { input } => Ok(Outcome::json(serde_json::to_value(coloring(&read_flat(input)?)?)?).reading(input)),
        FlatCmd::Project { input, keep } => {
            let p = project(&read_flat(input)?, (*keep).into())?;
            let m: BTreeMap<String, [i64; 2]> = p.iter().map(|(v, e)| (v.to_string(), [e.p, e.q])).collect();
            Ok(Outcome::json(json!({ "keep": serde_json::to_value(tsq_core::flats::Keep::from(*keep))?, "image": m })).reading(input))
        }
        FlatCmd::Embed { input, samples } => {
            let f = read_flat(input)?;
            let emb = embed(&f)?;
            let pairs = if f.complex.num_vertices() >= 2 { any_pairs(&f, *samples, &mut rng(seed)) } else { Vec::new() };
            let report = isom_embed_check(&f, &pairs)?;
            let m: BTreeMap<String, [i64; 4]> =
                emb.iter().map(|(v, p)| (v.to_string(), [p.b.p, p.b.q, p.r.p, p.r.q])).collect();
            let v = json!({ "check": report, "image": m });
            Ok(Outcome::json(v).failed_if(!report.ok()).reading(input))
        }
    }
}

fn probe(cmd: &ProbeCmd, seed: u64) -> Result<Outcome> {
    match cmd {
        ProbeCmd::Ft { src, sep, samples, radii, csv } => {
            let (ws, inputs) = windows(src, radii)?;
            let mut rows_out = String::from("window_radius,separation,sample_id,k_sync,k_subspace\n");
            let mut per = Vec::new();
            for f in &ws {
                let rows = ft_probe(f, *sep, *samples, &mut rng(seed))?;
                for r in &rows {
                    writeln!(rows_out, "{},{},{},{},{}", r.window_radius, r.separation, r.sample_id, r.k_sync, r.k_subspace)?;
                }
                let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
                for r in &rows {
                    *hist.entry(r.k_sync).or_default() += 1;
                }
                per.push(json!({
                    "window_radius": f.window.radius(),
                    "samples": rows.len(),
                    "max_sync": rows.iter().map(|r| r.k_sync).max(),
                    "max_subspace": rows.iter().map(|r| r.k_subspace).max(),
                    "sync_histogram": hist,
                }));
            }
            let maxes: Vec<&Value> = per.iter().map(|p| &p["max_sync"]).collect();
            let plateau = maxes.windows(2).all(|w| w[0] == w[1]);
            let mut out = Outcome::json(json!({ "separation": sep, "radii": per, "plateau": plateau }));
            out.inputs = inputs;
            if let Some(path) = csv {
                std::fs::write(path, rows_out).with_context(|| format!("writing {}", path.display()))?;
                out.written.push(path.clone());
            }
            Ok(out)
        }
        ProbeCmd::Linearity { src, samples, radii } => {
            let (ws, inputs) = windows(src, radii)?;
            let mut per = Vec::new();
            for f in &ws {
                let mut r = rng(seed);
                let mut reports = Vec::new();
                for _ in 0..*samples {
                    let (u, v) = long_pair(f, &mut r)?;
                    reports.push(rough_linearity_check(f, u, v)?);
                }
                let worst = reports.iter().max_by(|a, b| a.deviation_squared.cmp(&b.deviation_squared));
                per.push(json!({
                    "window_radius": f.window.radius(),
                    "samples": reports.len(),
                    "max_deviation_squared": worst.map(|w| w.deviation_squared.to_string()),
                    "max_deviation": worst.map(|w| w.deviation),
                    "period_found": reports.iter().filter(|r| r.period_found).count(),
                    "worst": worst,
                }));
            }
            let mut out = Outcome::json(json!({ "radii": per }));
            out.inputs = inputs;
            Ok(out)
        }
        ProbeCmd::Quasiflat { src, radii } => {
            let (ws, inputs) = windows(src, radii)?;
            let reports = ws.iter().map(quasi_flat).collect::<tsq_core::Result<Vec<_>>>()?;
            let stable = reports.windows(2).all(|w| w[0].c_squared == w[1].c_squared);
            let per: Vec<Value> = ws
                .iter()
                .zip(&reports)
                .map(|(f, q)| {
                    json!({ "window_radius": f.window.radius(), "c_squared": q.c_squared.to_string(), "c": q.c, "report": q })
                })
                .collect();
            let mut out = Outcome::json(json!({ "radii": per, "stable": stable }));
            out.inputs = inputs;
            Ok(out)
        }
        ProbeCmd::Noncross { src, samples } => {
            let (f, inputs) = source(src)?;
            let mut r = rng(seed);
            let (mut crossings, mut disagreements) = (Vec::new(), 0usize);
            for i in 0..*samples {
                let (u, v, x, y) = sample_pair(&f, 1, &mut r)?;
                let nc = noncrossing_check(&f, u, v, x, y)?;
                if nc.crossing {
                    crossings.push(json!({ "sample": i, "u": u, "v": v, "x": x, "y": y, "chords": [nc.first, nc.second] }));
                }
                if !next_move_locality_check(&f, u, v)?.agree {
                    disagreements += 1;
                }
            }
            let failed = !crossings.is_empty() || disagreements > 0;
            let v = json!({
                "samples": samples,
                "crossings": crossings.len(),
                "locality_disagreements": disagreements,
                "crossing_samples": crossings,
            });
            let mut out = Outcome::json(v).failed_if(failed);
            out.inputs = inputs;
            Ok(out)
        }
    }
}
