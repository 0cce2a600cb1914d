//! `wald`: command-line front end for the waldspace library.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use waldspace::{Error, ErrorKind, Param};

#[derive(Parser, Debug)]
#[command(name = "wald", version, about = "Geometry of phylogenetic forests")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// How Newick weights are read and written.
    #[arg(long, global = true, alias = "weights", value_enum, default_value_t = ParamArg::Length)]
    pub param: ParamArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamArg {
    Length,
    Lambda,
}

impl From<ParamArg> for Param {
    fn from(p: ParamArg) -> Param {
        match p {
            ParamArg::Length => Param::Length,
            ParamArg::Lambda => Param::Lambda,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Twostate,
    Gaussian,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Recursive,
    Symmetrized,
    Ode,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Orthant,
    Global,
    Exhaustive,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate and canonicalize a Newick string; lists the splits.
    Parse {
        tree: String,
        /// Print canonical Newick instead of the split table.
        #[arg(long)]
        newick: bool,
    },
    /// Distance between two walds.
    Dist {
        #[arg(long, default_value = "cov")]
        metric: String,
        a: String,
        b: String,
        /// Largest leaf count for which characters are enumerated.
        #[arg(long, default_value_t = waldspace::twostate::DEFAULT_CAP)]
        cap: usize,
    },
    /// Fire geodesics from a tree in a fan of directions within the plane of
    /// two internal edges.
    Shoot {
        tree: String,
        #[arg(long, value_enum, default_value_t = Model::Gaussian)]
        model: Model,
        #[arg(long, default_value_t = 24)]
        directions: usize,
        /// Positions of the two internal splits spanning the fan, counted
        /// among internal splits in topology order.
        #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1])]
        plane: Vec<usize>,
        #[arg(long, default_value_t = 1e-2)]
        dt: f64,
        #[arg(long, default_value_t = 1.0)]
        max_time: f64,
        /// Stop at a vanishing pendant edge instead of pinning it.
        #[arg(long)]
        no_clamp: bool,
        /// Treat --out as a directory and write one file per direction.
        #[arg(long)]
        per_direction: bool,
    },
    /// Approximate geodesic between two walds.
    Connect {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = Algorithm::Symmetrized)]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 32)]
        k: usize,
        /// Metric for the ODE algorithm.
        #[arg(long, value_enum, default_value_t = Model::Gaussian)]
        model: Model,
        /// Where to write the topology table of a projected path.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Nearest wald to a covariance matrix or to another wald's covariance.
    Project {
        /// Wald whose covariance is the target.
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        target: Option<String>,
        /// CSV file holding the target matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Global)]
        mode: Mode,
        /// Starting tree for the orthant and global modes.
        #[arg(long = "from")]
        start: Option<String>,
        /// Starting length on every edge in exhaustive mode.
        #[arg(long, default_value_t = 0.5)]
        seed_length: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Sample sectional curvatures at random points and planes.
    Curvature {
        /// Fixed point; random trees on --leaves leaves otherwise.
        tree: Option<String>,
        #[arg(long, default_value_t = 5)]
        leaves: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Model::Gaussian)]
        model: Model,
    },
    /// Fréchet mean of the covariance matrices of a sample of walds.
    Frechet {
        /// File with one wald per line.
        trees: String,
        /// Project the mean back onto wald space.
        #[arg(long)]
        project: bool,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
    },
    /// Distance from a balanced quartet with all weights λ0 to star trees.
    StarProfile {
        #[arg(long)]
        lambda0: f64,
        #[arg(long, default_value_t = 32)]
        k: usize,
        /// Number of evenly spaced grid points on (0, 1].
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Pairwise distances under several metrics and their correlations.
    Compare {
        /// File with one wald per line.
        trees: String,
        #[arg(long, value_delimiter = ',', default_values_t = ["js", "hellinger", "cov", "bhv", "pathdiff"].map(String::from))]
        metrics: Vec<String>,
        #[arg(long, default_value_t = waldspace::twostate::DEFAULT_CAP)]
        cap: usize,
        /// Directory for one distance matrix per metric.
        #[arg(long)]
        matrices: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Usage => 2,
        ErrorKind::Parse => 3,
        ErrorKind::Numeric => 4,
        ErrorKind::NonConvergence => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.global, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
