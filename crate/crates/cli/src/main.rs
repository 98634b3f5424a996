//! `dsc`: experiment driver for discrete sectional curvature.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::CliError;

#[derive(Parser)]
#[command(name = "dsc", version, about = "Discrete sectional curvature experiments")]
struct Cli {
    /// Worker threads; defaults to the available parallelism. Results do not
    /// depend on this value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sprinkle a random geometric graph and save it under a prefix.
    Sprinkle(SprinkleArgs),
    /// Metric distortion and effective edge length of a saved graph.
    Distortion(DistortionArgs),
    /// Sectional curvature of a saved graph from sampled triangles.
    Curvature(CurvatureArgs),
    /// Ball-volume (Wolfram-Ricci) curvature of a saved graph.
    Wolfram(WolframArgs),
    /// Error-against-distortion sweep over vertex counts.
    Converge(ConvergeArgs),
    /// Curvature distribution of a Sierpinski triangle graph.
    Fractal(FractalArgs),
    /// Radius estimates on an oblate spheroid.
    Earth(EarthArgs),
}

#[derive(Args)]
pub struct SprinkleArgs {
    /// Manifold as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub manifold: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.25)]
    pub p: f64,
    /// Fixed connection length instead of the smallest connected one.
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub seed: u64,
    /// Writes `<out>.edges` and `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct DistortionArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Number of sampled source vertices; all vertices when omitted on
    /// graphs of at most 2000 vertices, else 64.
    #[arg(long)]
    pub sources: Option<usize>,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Midpoint {
    Symmetric,
    Uniform,
    Nearest,
    Median,
}

#[derive(Args)]
pub struct CurvatureArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Triangles to sample, or triangles per apex with `--per-vertex`.
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub smin: Option<u32>,
    #[arg(long)]
    pub smax: Option<u32>,
    #[arg(long)]
    pub max_length: Option<f64>,
    /// Override the effective edge length stored with the graph.
    #[arg(long)]
    pub edge_length: Option<f64>,
    #[arg(long, value_enum, default_value_t = Midpoint::Median)]
    pub midpoint: Midpoint,
    #[arg(long)]
    pub per_vertex: bool,
    /// Also write the accepted curvatures (or the vertex map) as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Include the sample list in the JSON report.
    #[arg(long)]
    pub include_samples: bool,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args)]
pub struct WolframArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub vertices: usize,
    #[arg(long)]
    pub edge_length: Option<f64>,
    /// Denominator of the quartic term, 12 for surfaces.
    #[arg(long, default_value_t = dsc_core::wolfram::SURFACE_DENOMINATOR)]
    pub denominator: f64,
    /// Refit on radii where |K| (r l_e)^2 <= 1.
    #[arg(long)]
    pub refit: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub manifold: String,
    /// Defaults to the manifold's constant curvature.
    #[arg(long, allow_hyphen_values = true)]
    pub true_k: Option<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub counts: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub seeds_per: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args)]
pub struct FractalArgs {
    #[arg(long)]
    pub level: u32,
    /// Enumerate every triangle.
    #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
    pub exact: bool,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Edge length of one refinement step; curvatures are reported as
    /// `K * edge_scale^(-2 level)`.
    #[arg(long, default_value_t = 0.5)]
    pub edge_scale: f64,
    #[arg(long, default_value_t = 20)]
    pub tail_bins: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct EarthArgs {
    #[arg(long, default_value_t = dsc_core::earth::EARTH_EQUATORIAL_KM)]
    pub equatorial: f64,
    #[arg(long, default_value_t = dsc_core::earth::EARTH_POLAR_KM)]
    pub polar: f64,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub max_length: Option<f64>,
    #[arg(long, default_value_t = dsc_core::earth::DEFAULT_LEG_RANGE.0)]
    pub leg_min: f64,
    #[arg(long, default_value_t = dsc_core::earth::DEFAULT_LEG_RANGE.1)]
    pub leg_max: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
}

fn run(cli: Cli) -> Result<serde_json::Value, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::new("threads", e))?;
    }
    match cli.command {
        Command::Sprinkle(a) => commands::sprinkle(a),
        Command::Distortion(a) => commands::distortion(a),
        Command::Curvature(a) => commands::curvature(a),
        Command::Wolfram(a) => commands::wolfram(a),
        Command::Converge(a) => commands::converge(a),
        Command::Fractal(a) => commands::fractal(a),
        Command::Earth(a) => commands::earth(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return CliError::usage(msg.trim()).report();
        }
    };
    match run(cli).and_then(|v| output::print_json(&v)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
