use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn tsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsq")).args(args).env_remove("TSQ_SEED").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn cube_corner_is_rejected_with_its_weight() {
    let out = tsq(&["check-npc", path(&data("cube-corner.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["flag"], "not-npc");
    assert_eq!(v["witness"]["weight"], 9);
}

#[test]
fn tori_pass_the_check() {
    for f in ["square-torus.json", "triangle-torus.json", "snub-torus.json"] {
        let out = tsq(&["check-npc", path(&data(f))]);
        assert_eq!(out.status.code(), Some(0), "{f}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tsq(&["dist", path(&data("grid.json")), "--from", "0", "--bogus"]).status.code(), Some(2));
    assert_eq!(tsq(&["check-npc", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(tsq(&[]).status.code(), Some(2));
    let out = tsq(&["flat", "gen", "--preset", "striped", "--spec", "Q3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn grid_gs_family() {
    let out = tsq(&["gs", path(&data("grid.json")), "--from", "0", "--to", "17"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let chokes: Vec<u64> = v["choke_points"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(chokes, [0, 7, 14, 15, 16, 17]);
    assert_eq!(v["count"], "4");
    assert_eq!(v["paths"].as_array().unwrap().len(), 4);
}

#[test]
fn grid_distance() {
    let v = json(&tsq(&["dist", path(&data("grid.json")), "--from", "0", "--to", "35"]));
    assert_eq!(v["distance"], 10);
}

#[test]
fn hexagon_disc_gauss_bonnet() {
    let out = tsq(&["gauss-bonnet", path(&data("hexagon-disc.json"))]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generated_flats_classify() {
    let dir = TempDir::new().unwrap();
    for (args, class) in [
        (vec!["--preset", "gaussian", "--radius", "6"], "pure"),
        (vec!["--preset", "striped", "--spec", "S1,T2", "--radius", "8"], "striped"),
        (vec!["--preset", "radial-y", "--arm", "4"], "radial"),
        (vec!["--preset", "torus", "--radius", "10"], "thoroughly-crumpled"),
    ] {
        let f = dir.path().join("flat.json");
        let mut gen = vec!["flat", "gen", "-o", path(&f)];
        gen.extend(args);
        assert_eq!(tsq(&gen).status.code(), Some(0));
        let v = json(&tsq(&["flat", "classify", path(&f)]));
        assert_eq!(v["class"], class);
    }
}

#[test]
fn env_seed_overrides_flag() {
    let args = ["probe", "ft", "--preset", "torus", "--radius", "12", "--samples", "30"];
    let run = |seed: &str, env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_tsq"));
        c.args(args).args(["--seed", seed]);
        match env {
            Some(e) => c.env("TSQ_SEED", e),
            None => c.env_remove("TSQ_SEED"),
        };
        c.output().unwrap().stdout
    };
    assert_eq!(run("1", Some("2")), run("2", None));
    assert_eq!(run("5", None), run("5", None));
}

#[test]
fn manifests_and_outputs_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let mut digests = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("ft{i}.json"));
        let man = dir.path().join(format!("m{i}.json"));
        let st = tsq(&[
            "probe", "ft", "--preset", "torus", "--radius", "12", "--samples", "40", "-o", path(&out), "--manifest",
            path(&man),
        ]);
        assert_eq!(st.status.code(), Some(0));
        let m: Value = serde_json::from_str(&std::fs::read_to_string(&man).unwrap()).unwrap();
        assert_eq!(m["outputs"][0]["path"], path(&out));
        assert_eq!(m["seed"], 0x7513_2026u64);
        digests.push((std::fs::read(&out).unwrap(), m["outputs"][0]["sha256"].clone()));
    }
    assert_eq!(digests[0], digests[1]);
}

fn render(args: &[&str]) -> String {
    let out = tsq(&[&["render"][..], args].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn svg_is_valid_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("snub.json");
    tsq(&["flat", "gen", "--preset", "torus", "--radius", "10", "-o", path(&f)]);
    let args = [path(&f), "--interval", "10,150", "--gs", "10,150"];
    let a = render(&args);
    assert_eq!(a, render(&args));
    let doc = roxmltree::Document::parse(&a).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");

    let iv = json(&tsq(&["interval", path(&f), "--from", "10", "--to", "150"]));
    let labels = iv["labels"].as_object().unwrap().len();
    let circles = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle") && n.attribute("class") == Some("interval"))
        .count();
    assert_eq!(circles, labels);
}

#[test]
fn rotation_only_disc_renders() {
    let a = render(&[path(&data("hexagon-disc.json"))]);
    assert_eq!(a, render(&[path(&data("hexagon-disc.json"))]));
    roxmltree::Document::parse(&a).unwrap();
}

#[test]
fn radial_regions_render_one_bounded_region() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("y.json");
    tsq(&["flat", "gen", "--preset", "radial-y", "--arm", "4", "-o", path(&f)]);
    let svg = render(&[path(&f), "--regions"]);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let bounded = doc
        .descendants()
        .filter(|n| n.has_tag_name("text") && n.attribute("class") == Some("region bounded"))
        .count();
    assert_eq!(bounded, 1);
}

#[test]
fn reproduce_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let mut reports = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("r{i}"));
        let st = tsq(&["reproduce", "--only", "1,2,3", "--out", path(&out)]);
        assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stdout));
        let m: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
        reports.push((std::fs::read(out.join("report.json")).unwrap(), m["outputs"][0]["sha256"].clone()));
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn tampering_is_caught() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t");
    let st = tsq(&["reproduce", "--only", "1", "--tamper", "--out", path(&out)]);
    assert_eq!(st.status.code(), Some(1));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let failed = r["criteria"].as_array().unwrap().iter().filter(|c| c["passed"] == false).count();
    assert!(failed >= 1);
}
