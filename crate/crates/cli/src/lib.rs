//! Command-line front end for tsq-core: argument parsing, JSON/CSV/SVG
//! output, run manifests and the acceptance suite.

pub mod args;
pub mod commands;
pub mod manifest;
pub mod render;
pub mod sampling;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::args::Cli;
use crate::manifest::RunManifest;

/// Seed from `TSQ_SEED` if set, else from the flag.
pub fn effective_seed(flag: u64) -> anyhow::Result<u64> {
    match std::env::var("TSQ_SEED") {
        Ok(s) => s.trim().parse().map_err(|e| anyhow::anyhow!("TSQ_SEED={s:?}: {e}")),
        Err(_) => Ok(flag),
    }
}

/// Runs the CLI and returns the exit code: 0 on success, 1 when the
/// checked property fails, 2 on usage or input errors.
pub fn main_with(argv: Vec<OsString>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, &argv) {
        Ok(failed) => i32::from(failed),
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn execute(cli: &Cli, argv: &[OsString]) -> anyhow::Result<bool> {
    let seed = effective_seed(cli.seed)?;
    let out = commands::run(cli, seed)?;
    let mut manifest = RunManifest::new(argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(), seed);
    for p in &out.inputs {
        manifest.input(p)?;
    }
    match &cli.output {
        Some(p) => {
            std::fs::write(p, &out.text).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?;
            manifest.output(p)?;
        }
        None => {
            std::io::stdout().write_all(out.text.as_bytes())?;
            manifest.stdout(&out.text);
        }
    }
    for p in &out.written {
        manifest.output(p)?;
    }
    if let Some(m) = &cli.manifest {
        manifest.write(m)?;
    }
    Ok(out.failed)
}
