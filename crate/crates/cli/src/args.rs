use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tsq_core::flats::Keep;

pub const DEFAULT_SEED: u64 = 0x7513_2026;

#[derive(Debug, Parser)]
#[command(name = "tsq", version, about = "Curvature, geodesics and flats of triangle-square complexes")]
pub struct Cli {
    /// Seed for every random choice. TSQ_SEED takes precedence when set.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the main result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Record inputs, outputs and their digests in a run manifest.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Link condition at every vertex; exit 1 when some link has a short loop.
    CheckNpc {
        input: PathBuf,
        /// Also try to certify simple connectivity by collapsing.
        #[arg(long)]
        certificate: bool,
    },
    /// Curvature ledger of a disc diagram (rotations or coordinates).
    GaussBonnet { input: PathBuf },
    /// Edge-path distance, or the whole distance field without `--to`.
    Dist {
        input: PathBuf,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: Option<u32>,
    },
    Geodesics {
        input: PathBuf,
        #[command(flatten)]
        ends: Ends,
        #[arg(long, default_value_t = 1000)]
        cap: usize,
    },
    /// Rewrite a path into a geodesic by basic moves.
    Straighten {
        input: PathBuf,
        /// Path as `v0,e3,v7,...`.
        #[arg(long, conflicts_with = "through")]
        path: Option<String>,
        /// Path as a comma separated vertex list.
        #[arg(long, value_delimiter = ',')]
        through: Vec<u32>,
    },
    Interval {
        input: PathBuf,
        #[command(flatten)]
        ends: Ends,
    },
    /// Choke chain and Gersten-Short geodesics.
    Gs {
        input: PathBuf,
        #[command(flatten)]
        ends: Ends,
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    Flat {
        #[command(subcommand)]
        cmd: FlatCmd,
    },
    Probe {
        #[command(subcommand)]
        cmd: ProbeCmd,
    },
    /// SVG picture of a flat window or a disc diagram.
    Render {
        input: PathBuf,
        /// Shade the interval between two vertices, as `u,v`.
        #[arg(long, value_parser = parse_pair)]
        interval: Option<(u32, u32)>,
        /// Draw the choke chain and Gersten-Short geodesics, as `u,v`.
        #[arg(long, value_parser = parse_pair)]
        gs: Option<(u32, u32)>,
        /// Outline regions and label them.
        #[arg(long)]
        regions: bool,
    },
    /// Run every acceptance criterion and write a report.
    Reproduce {
        #[arg(long, default_value = "reproduce")]
        out: PathBuf,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Corrupt the Gaussian generator; the report must show failures.
        #[arg(long)]
        tamper: bool,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Ends {
    #[arg(long)]
    pub from: u32,
    #[arg(long)]
    pub to: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Eisenstein,
    Gaussian,
    Striped,
    RadialY,
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KeepArg {
    Blue,
    Red,
}

impl From<KeepArg> for Keep {
    fn from(k: KeepArg) -> Keep {
        match k {
            KeepArg::Blue => Keep::Blue,
            KeepArg::Red => Keep::Red,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Striped layout such as `S1,T2`: alternating square and triangle widths.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub radius: i64,
    /// Arm length of the radial preset; defaults to fit the radius.
    #[arg(long)]
    pub arm: Option<u32>,
    /// Strip widths of the radial preset.
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [1, 1, 1])]
    pub widths: Vec<u32>,
    /// Torus complex to develop; the snub-square torus by default.
    #[arg(long)]
    pub torus: Option<PathBuf>,
}

/// A window read from a file or generated on the spot.
#[derive(Debug, Clone, Args)]
pub struct FlatSource {
    /// Flat window JSON, as written by `flat gen`.
    #[arg(long, conflicts_with = "preset")]
    pub flat: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GenArgs,
}

#[derive(Debug, Subcommand)]
pub enum FlatCmd {
    Gen {
        #[command(flatten)]
        gen: GenArgs,
    },
    Classify { input: PathBuf },
    Regions { input: PathBuf },
    Color { input: PathBuf },
    Project {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "blue")]
        keep: KeepArg,
    },
    /// Product embedding with an isometry check on sampled pairs.
    Embed {
        input: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProbeCmd {
    /// Fellow-traveler constants of Gersten-Short geodesics.
    Ft {
        #[command(flatten)]
        src: FlatSource,
        #[arg(long, default_value_t = 1)]
        sep: u32,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Regenerate the window at each of these radii.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<i64>,
        /// Also write one CSV row per sample.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Deviation of Gersten-Short geodesic images from a line in ℰ × ℰ.
    Linearity {
        #[command(flatten)]
        src: FlatSource,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<i64>,
    },
    Quasiflat {
        #[command(flatten)]
        src: FlatSource,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<i64>,
    },
    /// Noncrossing of first-move chords and locality of the first move.
    Noncross {
        #[command(flatten)]
        src: FlatSource,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected u,v")?;
    let n = |t: &str| t.trim().parse::<u32>().map_err(|e| e.to_string());
    Ok((n(a)?, n(b)?))
}
