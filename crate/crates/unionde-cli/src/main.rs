//! `ude` - experiment runner for the unionde optimizer.
//!
//! Subcommands: `run` executes a seeded campaign and writes a results CSV,
//! `table` renders per-function mean errors with a win/tie/lose footer,
//! `compare` runs the pairwise signed-rank test, and `list` prints the
//! strategy and function registries.

mod campaign;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{split_list, CampaignConfig};

#[derive(Parser)]
#[command(
    name = "ude",
    version,
    about = "Differential evolution experiment runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a campaign of seeded runs and write results.csv
    Run(RunArgs),
    /// Render a per-function mean-error table from a results CSV
    Table(TableArgs),
    /// Wilcoxon signed-rank comparison of two strategies from a results CSV
    Compare(CompareArgs),
    /// List the available strategies and functions
    List(ListArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file with one `key = value` per line; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated strategy identifiers
    #[arg(long)]
    strategies: Option<String>,
    /// Comma-separated function identifiers
    #[arg(long)]
    functions: Option<String>,
    /// Independent repetitions per (strategy, function)
    #[arg(long)]
    runs: Option<u32>,
    /// Population size
    #[arg(long)]
    np: Option<usize>,
    /// Problem dimension
    #[arg(long)]
    dim: Option<usize>,
    /// Evaluation budget per run
    #[arg(long)]
    max_evals: Option<u64>,
    /// Base seed of the campaign's seed schedule
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory for results.csv
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tie tolerance used by downstream tables
    #[arg(long)]
    tie_tol: Option<f64>,
    /// Parameter policy: `jde` or `fixed:F=<v>,CR=<v>`
    #[arg(long)]
    param_policy: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Results CSV produced by `ude run`
    results: PathBuf,
    /// Strategy whose win/tie/lose counts appear in the footer
    #[arg(long)]
    reference: Option<String>,
    /// Means within this tolerance of the row minimum count as ties
    #[arg(long, default_value_t = 0.0)]
    tie_tol: f64,
}

#[derive(Args)]
struct CompareArgs {
    /// Results CSV produced by `ude run`
    results: PathBuf,
    /// First strategy (negative ranks favor this one)
    strategy_a: String,
    /// Second strategy (positive ranks favor this one)
    strategy_b: String,
    /// Significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Args)]
struct ListArgs {
    /// Dimension used to display function bounds
    #[arg(long, default_value_t = 30)]
    dim: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Table(args) => cmd_table(args),
        Command::Compare(args) => cmd_compare(args),
        Command::List(args) => cmd_list(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut config = CampaignConfig::default();
    if let Some(path) = &args.config {
        config.apply_file(path)?;
    }
    if let Some(v) = args.strategies {
        config.strategies = split_list(&v);
    }
    if let Some(v) = args.functions {
        config.functions = split_list(&v);
    }
    if let Some(v) = args.runs {
        config.runs = v;
    }
    if let Some(v) = args.np {
        config.np = v;
    }
    if let Some(v) = args.dim {
        config.dim = v;
    }
    if let Some(v) = args.max_evals {
        config.max_evals = v;
    }
    if let Some(v) = args.seed {
        config.base_seed = v;
    }
    if let Some(v) = args.jobs {
        config.jobs = v;
    }
    if let Some(v) = args.out {
        config.output_dir = v;
    }
    if let Some(v) = args.tie_tol {
        config.tie_tol = v;
    }
    if let Some(v) = args.param_policy {
        config.param_policy = v;
    }

    let rows = campaign::execute(&config)?;
    let path = config.output_dir.join("results.csv");
    campaign::write_csv(&rows, &path)?;
    eprintln!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<()> {
    let rows = campaign::read_csv(&args.results)?;
    let agg = report::aggregate(&rows)?;
    let reference = match args.reference {
        Some(name) => name,
        None => {
            if agg.strategies.iter().any(|s| s == "ude") {
                "ude".to_string()
            } else {
                agg.strategies[0].clone()
            }
        }
    };
    print!("{}", report::render_table(&agg, &reference, args.tie_tol)?);
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let rows = campaign::read_csv(&args.results)?;
    let agg = report::aggregate(&rows)?;
    let (result, functions) =
        report::compare(&agg, &args.strategy_a, &args.strategy_b, args.alpha)?;
    print!(
        "{}",
        report::render_comparison(
            &args.strategy_a,
            &args.strategy_b,
            &result,
            functions,
            args.alpha
        )
    );
    Ok(())
}

fn cmd_list(args: ListArgs) -> Result<()> {
    println!("strategies:");
    for strategy in unionde::mutation::MutationStrategy::all() {
        println!(
            "  {:<18} (min NP {})",
            strategy.name(),
            strategy.min_population()
        );
    }
    println!("functions (D = {}):", args.dim);
    for f in unionde::benchmarks::suite(args.dim.max(1)) {
        println!(
            "  {:<18} bounds [{}, {}]",
            f.name(),
            f.bounds().lower()[0],
            f.bounds().upper()[0]
        );
    }
    Ok(())
}
