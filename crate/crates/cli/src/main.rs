//! `pqc-lens` command-line front end.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pqc_lens::analyzers::EntanglementMeasure;
use pqc_lens::stats::DivergenceMeasure;
use pqc_lens::trainer::Method;

/// Diagnostics for parameterized quantum circuits.
#[derive(Debug, Parser)]
#[command(name = "pqc-lens", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Base seed; every random draw derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory, created if absent.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Clone, Args)]
struct TrainArgs {
    #[arg(long, default_value = "adam")]
    optimizer: Method,
    #[arg(long = "lr", default_value_t = 0.05)]
    learning_rate: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    /// Grid nodes per axis.
    #[arg(long, default_value_t = 21)]
    points: usize,
    /// Half-width of the grid along each axis.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    range: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Divergence of the fidelity distribution from the Haar law.
    Expressibility {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value = "kld")]
        measure: DivergenceMeasure,
        #[arg(long, default_value_t = 75)]
        bins: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Meyer-Wallach or Scott entangling capability.
    Entanglement {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value = "meyer-wallach")]
        measure: EntanglementMeasure,
        #[command(flatten)]
        common: Common,
    },
    /// Entanglement spectrum against the Haar reference.
    Spectrum {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value = "kld")]
        measure: DivergenceMeasure,
        #[arg(long, default_value_t = 75)]
        bins: usize,
        #[arg(long, default_value_t = 1000)]
        reference_samples: usize,
        #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
        cutoff: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Minimize the circuit's cost and record the trajectories.
    Train {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Cost over a 2-D slice of parameter space.
    Landscape {
        #[arg(long)]
        circuit: PathBuf,
        /// Slice origin as comma-separated angles; trained when omitted.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        #[arg(long, default_value = "random")]
        basis: BasisArg,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Train several restarts and embed their paths in 2-D.
    Path {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value = "pca")]
        mode: ModeArg,
        #[arg(long, default_value_t = 30.0)]
        perplexity: f64,
        /// Draw the paths over the landscape of their PCA slice.
        #[arg(long)]
        overlay: bool,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Per-step parameter histograms across a training ensemble.
    Histogram {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 32)]
        members: usize,
        #[arg(long, default_value_t = 75)]
        bins: usize,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Gap between the Haar-sampled and trained cost minima.
    Reachability {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 1000)]
        haar_samples: usize,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        common: Common,
    },
    /// MaxCut QAOA on a random graph: training, landscape and paths.
    Qaoa {
        #[arg(long, default_value_t = 8)]
        nodes: usize,
        #[arg(long, default_value_t = 20)]
        edges: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 300)]
        steps: usize,
        #[arg(long = "lr", default_value_t = 0.05)]
        learning_rate: f64,
        #[arg(long, default_value_t = 1024)]
        shots: usize,
        /// Graph seed; defaults to `--seed`.
        #[arg(long)]
        graph_seed: Option<u64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Global vs local cost gradients of the identity-learning ansatz.
    Plateau {
        #[arg(long, default_value_t = 4)]
        qubits: usize,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum BasisArg {
    Random,
    Pca,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Pca,
    Tsne,
}

fn configure_threads() -> Result<(), commands::CliError> {
    if let Ok(v) = std::env::var("PQC_LENS_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| commands::CliError::Usage(format!("PQC_LENS_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| commands::CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match configure_threads().and_then(|()| commands::run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
