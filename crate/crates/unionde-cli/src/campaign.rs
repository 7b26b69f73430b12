//! Campaign execution: fans seeded runs out across worker threads and
//! serializes the results into one CSV in canonical row order.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use unionde::benchmarks::ObjectiveFunction;
use unionde::engine::{run, RunConfig};

use crate::config::{campaign_seed, CampaignConfig};

/// One CSV row; field order fixes the header:
/// `function,strategy,run_index,seed,final_error,evals_used`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRow {
    pub function: String,
    pub strategy: String,
    pub run_index: u32,
    pub seed: u64,
    pub final_error: f64,
    pub evals_used: u64,
}

/// Executes the whole campaign and returns the rows in canonical order
/// (function, then strategy, then run index).
pub fn execute(config: &CampaignConfig) -> Result<Vec<RunRow>> {
    let (strategies, policy) = config.resolve()?;

    // Task list in canonical order; the parallel map preserves it.
    let mut functions = config.functions.clone();
    functions.sort();
    let mut strategy_names: Vec<&str> = strategies.iter().map(|s| s.name()).collect();
    strategy_names.sort_unstable();

    struct Task {
        function: String,
        strategy: unionde::mutation::MutationStrategy,
        run_index: u32,
        seed: u64,
    }
    let mut tasks = Vec::new();
    for function in &functions {
        for name in &strategy_names {
            let strategy =
                unionde::mutation::MutationStrategy::from_name(name).expect("resolved above");
            for run_index in 0..config.runs {
                tasks.push(Task {
                    function: function.clone(),
                    strategy,
                    run_index,
                    seed: campaign_seed(config.base_seed, name, function, run_index),
                });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .context("cannot build worker pool")?;
    let total = tasks.len();
    let done = AtomicUsize::new(0);

    let rows: Result<Vec<RunRow>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| {
                let objective = ObjectiveFunction::by_name(&task.function, config.dim)?;
                let run_config = RunConfig {
                    np: config.np,
                    dim: config.dim,
                    max_evals: config.max_evals,
                    seed: task.seed,
                    strategy: task.strategy,
                    param_policy: policy,
                    target_error: None,
                };
                let result = run(&run_config, &objective)
                    .with_context(|| format!("{} on {}", task.strategy.name(), task.function))?;
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                eprintln!(
                    "[{finished}/{total}] {} {} run {} -> {:e} ({} evals)",
                    task.function,
                    task.strategy.name(),
                    task.run_index,
                    result.best_error,
                    result.evals_used
                );
                Ok(RunRow {
                    function: task.function.clone(),
                    strategy: task.strategy.name().to_string(),
                    run_index: task.run_index,
                    seed: task.seed,
                    final_error: result.best_error,
                    evals_used: result.evals_used,
                })
            })
            .collect()
    });
    rows
}

pub fn write_csv(rows: &[RunRow], path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    let mut writer =
        csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<RunRow>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        let row: RunRow =
            record.with_context(|| format!("malformed results row in {}", path.display()))?;
        rows.push(row);
    }
    Ok(rows)
}
