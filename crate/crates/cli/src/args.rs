use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fgcount::limits::LatticeSet;

#[derive(Debug, Parser)]
#[command(name = "fgcount", version, about = "Census of cyclically reduced words and conjugacy classes in free groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Global {
    /// Rank of the free group.
    #[arg(long, global = true, default_value_t = 2)]
    pub k: usize,

    /// Word or class length.
    #[arg(long, global = true)]
    pub m: Option<usize>,

    /// Largest length for experiments.
    #[arg(long = "m-max", global = true)]
    pub m_max: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Engine::Dp)]
    pub engine: Engine,

    /// Lattice set: full, empty, coprime, singleton:0,0,
    /// progression:l=2,2;a=0,0, halfspace:1, sector:u=1,0;cos=0.5, not:<set>,
    /// finite:[[0,0],[1,1]].
    #[arg(long, global = true, default_value = "full", value_parser = parse_set)]
    pub set: LatticeSet,

    #[arg(long = "cache-dir", global = true, env = "FGCOUNT_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Oracle enumeration guard (largest length); defaults by rank.
    #[arg(long, global = true)]
    pub guard: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Oracle,
    Dp,
    Fourier,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Oracle => "oracle",
            Engine::Dp => "dp",
            Engine::Fourier => "fourier",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassMode {
    Orbit,
    Burnside,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Word,
    Class,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact counts n_beta(m) (or N_beta(m) with --cumulative).
    Count {
        /// Keep only max|beta_i| <= radius (DP engine).
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        cumulative: bool,
    },
    /// Conjugacy-class counts by homology at length m.
    Classes {
        #[arg(long, value_enum, default_value_t = ClassMode::Burnside)]
        method: ClassMode,
    },
    /// Gaussian local-limit prediction against the exact count.
    Predict {
        /// Homology vector, e.g. 0,0.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Lattice density by ball scan (--radius) or Gaussian sum (--t).
    Density {
        /// Quadratic form matrix, rows separated by ';', or identity:d.
        #[arg(long)]
        norm: Option<String>,
        /// Lattice dimension when --norm is omitted.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
        #[arg(long = "point-budget", default_value_t = 100_000_000)]
        point_budget: u128,
    },
    /// Surface-side Gaussian predictor sum for genus g.
    SurfacePredictor {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        norm: Option<String>,
        #[arg(long)]
        t: f64,
        #[arg(long = "point-budget", default_value_t = 100_000_000)]
        point_budget: u128,
    },
    /// End-to-end experiments.
    Experiment {
        #[command(subcommand)]
        which: Experiment,
        /// Also write report.json and series.csv into this directory.
        #[arg(long = "out-dir", global = true)]
        out_dir: Option<PathBuf>,
    },
    /// Series coefficients of the rational identity against oracle character
    /// sums.
    IdentityCheck {
        /// Character point; random points are drawn when omitted.
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        #[arg(long, default_value_t = 20)]
        characters: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    Coprime {
        #[arg(long, value_enum, default_value_t = LevelArg::Word)]
        level: LevelArg,
    },
    Progression {
        /// Moduli l_1..l_k.
        #[arg(long)]
        l: String,
        /// Residues a_1..a_k.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    LocalLimit {
        /// Lengths, e.g. 8,16,24,32.
        #[arg(long, default_value = "8,16,24,32")]
        lengths: String,
    },
    Regression {
        /// Shallow depths.
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_set(text: &str) -> Result<LatticeSet, String> {
    text.parse::<LatticeSet>().map_err(|e| e.to_string())
}
