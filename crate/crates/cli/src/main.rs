mod args;
mod commands;
mod output;
mod verify;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};

use args::{parse_graph, parse_range, parse_stat, GraphSpec, ModelArgs, OutputArgs, SetArgs};
use commands::McArgs;
use permaspin::StatisticKind;

/// Exact, approximate and sampled partition functions of the permaspin model.
#[derive(Parser, Debug)]
#[command(name = "permaspin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generating function of a permutation statistic over S_k
    Gf {
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long, value_parser = parse_stat, default_value = "destat")]
        stat: StatisticKind,
        /// Emit every length from 1 to k
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ring partition function and free energy from the transfer matrix
    Exact {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Transfer-matrix eigenvalues, numeric and closed form
    Spectrum {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Print the symbolic a^i b^j exponents instead
        #[arg(long)]
        symbolic: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cubic-factor root and discriminant surfaces over a (c, d) grid
    Surfaces {
        /// Points per axis
        #[arg(long, default_value_t = 40)]
        grid: usize,
        #[arg(long, value_parser = parse_range, default_value = "0.05:2")]
        c_range: (f64, f64),
        #[arg(long, value_parser = parse_range, default_value = "0.05:2")]
        d_range: (f64, f64),
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mean-field partition function
    Meanfield {
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Nearest neighbours per site
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Low-temperature class sums against the exact ring
    Lowtemp {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Metropolis sampling
    Mc {
        #[command(flatten)]
        set: SetArgs,
        /// ring, path, complete or file:PATH (1-based edge list)
        #[arg(long, value_parser = parse_graph, default_value = "ring")]
        graph: GraphSpec,
        /// Number of sites (default 8; optional for file graphs)
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        sweeps: u64,
        #[arg(long, default_value_t = 1_000)]
        burn_in: u64,
        /// Emit the per-sweep time series instead of averages
        #[arg(long)]
        series: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Oracle cross-checks; nonzero exit on any failure
    Verify {
        /// Keep enumerations at n <= 4
        #[arg(long)]
        quick: bool,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("PERMASPIN_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("PERMASPIN_THREADS must be a positive integer, got '{value}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (text, output) = match cli.command {
        Command::Verify { quick } => {
            let failed = verify::run(quick);
            return Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Gf { k, stat, all, output } => (commands::gf(k, stat, all, output.format)?, output),
        Command::Exact { set, n, model, output } => {
            (commands::exact(&set, n, &model, output.format)?, output)
        }
        Command::Spectrum { set, model, symbolic, output } => {
            let text = if symbolic {
                commands::symbolic(&set, output.format)?
            } else {
                commands::spectrum(&set, &model, output.format)?
            };
            (text, output)
        }
        Command::Surfaces { grid, c_range, d_range, output } => {
            (commands::surfaces(grid, c_range, d_range, output.format)?, output)
        }
        Command::Meanfield { n, q, model, output } => {
            (commands::meanfield(n, q, &model, output.format)?, output)
        }
        Command::Lowtemp { n, model, output } => (commands::lowtemp(n, &model, output.format)?, output),
        Command::Mc { set, graph, n, model, seed, sweeps, burn_in, series, output } => {
            if series && model.beta.is_sweep() {
                Cli::command()
                    .error(ErrorKind::ArgumentConflict, "--series needs a single --beta value")
                    .exit();
            }
            let a = McArgs {
                set: &set,
                model: &model,
                graph: &graph,
                n,
                seed,
                sweeps,
                burn_in,
                series,
            };
            (commands::mc(&a, output.format)?, output)
        }
    };
    output::emit(&text, output.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
