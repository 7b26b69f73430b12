//! Result aggregation and text reports: the per-function mean-error table
//! with best-value marks and win/tie/lose footer, and the pairwise
//! signed-rank comparison report.

use anyhow::{bail, Result};
use unionde::stats::{wilcoxon_signed_rank, win_tie_lose, PairedSample, WilcoxonResult};

use crate::campaign::RunRow;

/// Per-function mean errors grouped by strategy, with functions and
/// strategies in first-appearance order of the CSV.
pub struct Aggregated {
    pub functions: Vec<String>,
    pub strategies: Vec<String>,
    /// `means[f][s]` pairs up with `functions[f]` and `strategies[s]`.
    pub means: Vec<Vec<f64>>,
}

pub fn aggregate(rows: &[RunRow]) -> Result<Aggregated> {
    if rows.is_empty() {
        bail!("the results file contains no data rows");
    }
    let mut functions: Vec<String> = Vec::new();
    let mut strategies: Vec<String> = Vec::new();
    for row in rows {
        if !functions.contains(&row.function) {
            functions.push(row.function.clone());
        }
        if !strategies.contains(&row.strategy) {
            strategies.push(row.strategy.clone());
        }
    }
    let mut sums = vec![vec![0.0f64; strategies.len()]; functions.len()];
    let mut counts = vec![vec![0usize; strategies.len()]; functions.len()];
    for row in rows {
        let f = functions.iter().position(|x| *x == row.function).unwrap();
        let s = strategies.iter().position(|x| *x == row.strategy).unwrap();
        sums[f][s] += row.final_error;
        counts[f][s] += 1;
    }
    let mut means = vec![vec![f64::NAN; strategies.len()]; functions.len()];
    for f in 0..functions.len() {
        for s in 0..strategies.len() {
            if counts[f][s] == 0 {
                bail!(
                    "no rows for function '{}' under strategy '{}'",
                    functions[f],
                    strategies[s]
                );
            }
            means[f][s] = sums[f][s] / counts[f][s] as f64;
        }
    }
    Ok(Aggregated {
        functions,
        strategies,
        means,
    })
}

/// Renders the mean-error table. Every strategy within `tie_tol` of the row
/// minimum is marked with `*`; the footer counts win/tie/lose of the
/// reference strategy against each other strategy.
pub fn render_table(agg: &Aggregated, reference: &str, tie_tol: f64) -> Result<String> {
    let Some(ref_idx) = agg.strategies.iter().position(|s| s == reference) else {
        bail!(
            "reference strategy '{reference}' not in results (present: {})",
            agg.strategies.join(", ")
        );
    };

    let cells: Vec<Vec<String>> = agg
        .means
        .iter()
        .map(|row| {
            let best = row.iter().cloned().fold(f64::INFINITY, f64::min);
            row.iter()
                .map(|&m| {
                    let mark = if (m - best).abs() <= tie_tol {
                        "*"
                    } else {
                        " "
                    };
                    format!("{m:.6e}{mark}")
                })
                .collect()
        })
        .collect();

    let name_width = agg
        .functions
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(8)
        .max("function".len());
    let col_widths: Vec<usize> = agg
        .strategies
        .iter()
        .enumerate()
        .map(|(s, name)| {
            cells
                .iter()
                .map(|row| row[s].len())
                .max()
                .unwrap_or(0)
                .max(name.len())
        })
        .collect();

    let mut out = String::new();
    out.push_str(&format!("{:<name_width$}", "function"));
    for (s, name) in agg.strategies.iter().enumerate() {
        out.push_str(&format!("  {:>width$}", name, width = col_widths[s]));
    }
    out.push('\n');
    for (f, function) in agg.functions.iter().enumerate() {
        out.push_str(&format!("{function:<name_width$}"));
        for (s, cell) in cells[f].iter().enumerate() {
            out.push_str(&format!("  {:>width$}", cell, width = col_widths[s]));
        }
        out.push('\n');
    }
    out.push('\n');
    for (s, name) in agg.strategies.iter().enumerate() {
        if s == ref_idx {
            continue;
        }
        let other: Vec<f64> = agg.means.iter().map(|row| row[s]).collect();
        let reference_means: Vec<f64> = agg.means.iter().map(|row| row[ref_idx]).collect();
        let (win, tie, lose) = win_tie_lose(&other, &reference_means, tie_tol);
        out.push_str(&format!(
            "{reference} vs {name}: win {win} tie {tie} lose {lose}\n"
        ));
    }
    Ok(out)
}

/// Runs the signed-rank comparison of `strategy_a` against `strategy_b`
/// over their common function set.
pub fn compare(
    agg: &Aggregated,
    strategy_a: &str,
    strategy_b: &str,
    alpha: f64,
) -> Result<(WilcoxonResult, usize)> {
    let find = |name: &str| -> Result<usize> {
        agg.strategies
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| {
                anyhow::anyhow!(
                    "strategy '{name}' not in results (present: {})",
                    agg.strategies.join(", ")
                )
            })
    };
    let a = find(strategy_a)?;
    let b = find(strategy_b)?;
    let means_a: Vec<f64> = agg.means.iter().map(|row| row[a]).collect();
    let means_b: Vec<f64> = agg.means.iter().map(|row| row[b]).collect();
    let n = means_a.len();
    let sample = PairedSample::new(means_a, means_b)?;
    Ok((wilcoxon_signed_rank(&sample, alpha), n))
}

/// Formats the comparison in the conventional column order:
/// MR-, MR+, SR-, SR+, p-value, difference verdict.
pub fn render_comparison(
    strategy_a: &str,
    strategy_b: &str,
    result: &WilcoxonResult,
    functions: usize,
    alpha: f64,
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Wilcoxon signed-rank test at alpha = {alpha} over {functions} functions\n"
    ));
    out.push_str(&format!(
        "{:<24}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}  {:>10}\n",
        "comparison", "MR-", "MR+", "SR-", "SR+", "P-value", "Difference"
    ));
    let p = if result.p_value >= 1e-4 {
        format!("{:.4}", result.p_value)
    } else {
        format!("{:.2e}", result.p_value)
    };
    out.push_str(&format!(
        "{:<24}  {:>8.2}  {:>8.2}  {:>8.2}  {:>8.2}  {:>8}  {:>10}\n",
        format!("{strategy_a} vs {strategy_b}"),
        result.mr_minus,
        result.mr_plus,
        result.sr_minus,
        result.sr_plus,
        p,
        result.verdict,
    ));
    if result.underpowered {
        out.push_str(&format!(
            "note: only {} non-tied pairs; the test is underpowered and the verdict is '='\n",
            result.n_effective
        ));
    }
    out
}
