use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{ensure, Context};
use clap::{Parser, Subcommand};

use greedylab::greedy::Mode;
use greedylab::weights::WeightDist;
use lab::commands;
use lab::config::Format;

#[derive(Parser)]
#[command(
    name = "lab",
    version,
    about = "Greedy independent-set and matching experiments: table reproduction, \
             Monte Carlo studies, recursion convergence, and verification suites."
)]
struct Cli {
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recompute a published table (1, 2, or 3) with a diff column.
    Tables {
        /// Which table to reproduce.
        which: u8,
    },

    /// Root selection statistics on a regular tree, next to the analytic
    /// values from the integer recursions.
    TreeProb {
        /// Degree of the root (interior nodes have r-1 children).
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Tree depth.
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },

    /// Monte Carlo greedy statistics on a named graph or edge-list file.
    GraphMc {
        /// Built-in name (petersen, heawood, mcgee, tutte_coxeter, k4,
        /// cycle:n) or a path to an edge-list file.
        #[arg(long)]
        graph: String,
        /// "is" for independent sets, "m" for matchings.
        #[arg(long, default_value = "is")]
        mode: String,
        /// Weight distribution: uniform:a,b | exp:rate | ueps:eps.
        #[arg(long, default_value = "uniform:0,1")]
        dist: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },

    /// Distance of the depth-d recursion laws from their closed-form limit.
    Recursion {
        /// Branching factor of the recursion.
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Largest depth to report.
        #[arg(long, default_value_t = 10)]
        dmax: usize,
        /// Truncation point; defaults to 64*r*(dmax+1).
        #[arg(long = "K")]
        k: Option<usize>,
        /// Which recursion: x (node law) or y (edge law).
        #[arg(long, default_value = "x")]
        var: String,
    },

    /// Variance of the greedy fractions across random regular graphs.
    VarScaling {
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Comma-separated graph sizes.
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value = "uniform:0,1")]
        dist: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },

    /// Run a verification suite; exits nonzero if any check fails.
    Verify {
        /// ibs, bonus, recursion, or all.
        suite: String,
    },
}

// LAB_THREADS caps the rayon worker pool; results are identical for any
// worker count, so this only trades latency for core usage.
fn configure_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var("LAB_THREADS") {
        let threads: usize = raw
            .trim()
            .parse()
            .with_context(|| format!("LAB_THREADS must be a positive integer, got {raw:?}"))?;
        ensure!(threads >= 1, "LAB_THREADS must be at least 1, got {threads}");
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let (report, passed) = match &cli.command {
        Cmd::Tables { which } => (commands::cmd_tables(*which)?, true),
        Cmd::TreeProb { r, d, trials, seed } => {
            (commands::cmd_tree_probability(*r, *d, *trials, *seed)?, true)
        }
        Cmd::GraphMc {
            graph,
            mode,
            dist,
            trials,
            seed,
        } => {
            let mode = Mode::parse(mode)?;
            let dist = WeightDist::parse(dist)?;
            (commands::cmd_graph_mc(graph, mode, dist, *trials, *seed)?, true)
        }
        Cmd::Recursion { r, dmax, k, var } => {
            (commands::cmd_recursion(*r, *dmax, *k, var)?, true)
        }
        Cmd::VarScaling {
            r,
            n,
            trials,
            dist,
            seed,
        } => {
            let dist = WeightDist::parse(dist)?;
            (commands::cmd_variance_scaling(*r, n, *trials, dist, *seed)?, true)
        }
        Cmd::Verify { suite } => commands::cmd_verify(suite)?,
    };
    report.write(cli.out.as_deref(), cli.format)?;
    Ok(passed)
}

fn main() -> ExitCode {
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
