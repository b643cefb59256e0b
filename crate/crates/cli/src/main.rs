//! `aysurf`: build Arnoux-Yoccoz surfaces, run verification suites and query
//! the dynamics of f_g and f_inf from the command line.
//!
//! Every command prints one JSON report on stdout (or writes the requested
//! file) and a one-line summary on stderr. Exit codes: 0 success, 1 failed
//! verification, 2 usage error.

mod commands;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default seed for the randomized suites.
pub const DEFAULT_SEED: u64 = 20_160_224;

/// Directory for written files when `--path` is relative or absent.
pub const OUT_DIR_VAR: &str = "AYSURF_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "aysurf", version, about = "Exact Arnoux-Yoccoz surfaces and their dynamics")]
pub struct Cli {
    /// Seed for randomized checks; the value used is echoed in every report.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Run data-parallel work on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a surface and emit it as JSON or SVG.
    Build(BuildArgs),
    /// Run a verification suite at one genus.
    Verify(VerifyArgs),
    /// Interval exchange queries.
    #[command(subcommand)]
    Iet(IetCommand),
    /// Queries on the binary-sequence model of f_inf.
    #[command(subcommand)]
    Infinite(InfiniteCommand),
    /// Trace a straight trajectory from a point of the base.
    Trace(TraceArgs),
    /// The genus-2 Veech group computation.
    #[command(subcommand)]
    Veech2(Veech2Command),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Genus {
    Finite(u32),
    Inf,
}

impl std::str::FromStr for Genus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" | "infinity" => Ok(Genus::Inf),
            _ => match s.parse::<u32>() {
                Ok(g) if g >= 1 => Ok(Genus::Finite(g)),
                _ => Err(format!("expected a genus >= 1 or 'inf', got {s:?}")),
            },
        }
    }
}

impl std::fmt::Display for Genus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Genus::Finite(g) => write!(f, "{g}"),
            Genus::Inf => write!(f, "inf"),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Presentation {
    Staircase,
    Triangles,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutFormat {
    Json,
    Svg,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long)]
    pub genus: Genus,
    /// Truncation depth for `--genus inf`.
    #[arg(long)]
    pub truncation: Option<u32>,
    #[arg(long, value_enum, default_value_t = Presentation::Staircase)]
    pub presentation: Presentation,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    /// Output file; relative paths resolve against $AYSURF_OUT_DIR when set.
    #[arg(long)]
    pub path: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Bounds,
    Iet,
    Surface,
    Psi,
    Rho,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Iet => "iet",
            Suite::Surface => "surface",
            Suite::Psi => "psi",
            Suite::Rho => "rho",
            Suite::All => "all",
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub genus: u32,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

#[derive(Subcommand, Debug)]
pub enum IetCommand {
    /// Orbit of a rational point under f_g (or f_inf for `--genus inf`).
    Orbit {
        #[arg(long)]
        genus: Genus,
        /// Starting point p/q in [0, 1).
        #[arg(long)]
        start: String,
        /// Number of steps; negative walks backwards.
        #[arg(long, allow_hyphen_values = true)]
        steps: i64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapName {
    F,
    FInv,
    BigF,
    BigFInv,
    R,
    HPrime,
    HDouble,
    HInf,
}

#[derive(Subcommand, Debug)]
pub enum InfiniteCommand {
    /// Apply one of the maps to a sequence.
    Apply {
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value_t = MapName::F)]
        map: MapName,
        /// Power of f_inf (only with `--map f`).
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
    },
    /// Locate a dyadic in the orbit of 0 or of 1/2.
    Classify {
        #[arg(long)]
        point: String,
    },
    /// Index and Thue-Morse parity of a dyadic, with the half-orbit they predict.
    OrbitIndex {
        #[arg(long)]
        point: String,
    },
    /// Check the four conjugacy relations at one point, or on seeded samples.
    Conjugacies {
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Vertical,
    Horizontal,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[arg(long)]
    pub genus: Genus,
    /// Truncation depth for `--genus inf`.
    #[arg(long)]
    pub truncation: Option<u32>,
    /// Abscissa p/q of the starting point on the base.
    #[arg(long)]
    pub x: String,
    #[arg(long, value_enum, default_value_t = Direction::Vertical)]
    pub direction: Direction,
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    #[arg(long)]
    pub path: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Veech2Command {
    /// Is [[X, Y], [Z, W]] in the intersection of the two lattice groups?
    Check {
        #[arg(allow_hyphen_values = true)]
        x: i64,
        #[arg(allow_hyphen_values = true)]
        y: i64,
        #[arg(allow_hyphen_values = true)]
        z: i64,
        #[arg(allow_hyphen_values = true)]
        w: i64,
    },
    /// Compare the congruence criterion with exact conjugation on a box.
    Sweep {
        #[arg(long, default_value_t = 10)]
        range: i64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 2 } else { 0 });
        }
    };
    ExitCode::from(commands::run(&cli))
}
