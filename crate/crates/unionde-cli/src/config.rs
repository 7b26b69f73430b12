//! Campaign configuration: defaults, config-file parsing, flag overrides,
//! and the stable per-run seed schedule.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use unionde::benchmarks::FUNCTION_NAMES;
use unionde::mutation::MutationStrategy;
use unionde::params::ParamPolicy;

/// Everything one `run` invocation needs.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub strategies: Vec<String>,
    pub functions: Vec<String>,
    pub runs: u32,
    pub np: usize,
    pub dim: usize,
    pub max_evals: u64,
    pub base_seed: u64,
    pub param_policy: String,
    pub output_dir: PathBuf,
    pub tie_tol: f64,
    /// Worker threads; 0 means all available cores.
    pub jobs: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            strategies: vec!["ude".to_string()],
            functions: FUNCTION_NAMES.iter().map(|s| s.to_string()).collect(),
            runs: 50,
            np: 50,
            dim: 30,
            max_evals: 300_000,
            base_seed: 42,
            param_policy: "jde".to_string(),
            output_dir: PathBuf::from("."),
            tie_tol: 0.0,
            jobs: 0,
        }
    }
}

impl CampaignConfig {
    /// Applies a flat key-value config file: one `key = value` per line,
    /// `#` comments, repeated `strategies`/`functions` keys (or comma
    /// lists) extend, scalar keys take the last value.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut saw_strategies = false;
        let mut saw_functions = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                );
            };
            let key = key.trim();
            let value = value.trim();
            let parse_err = |what: &str| {
                format!(
                    "{}:{}: cannot parse '{value}' as {what}",
                    path.display(),
                    lineno + 1
                )
            };
            match key {
                "strategies" => {
                    if !saw_strategies {
                        self.strategies.clear();
                        saw_strategies = true;
                    }
                    self.strategies.extend(split_list(value));
                }
                "functions" => {
                    if !saw_functions {
                        self.functions.clear();
                        saw_functions = true;
                    }
                    self.functions.extend(split_list(value));
                }
                "runs" => self.runs = value.parse().with_context(|| parse_err("an integer"))?,
                "np" => self.np = value.parse().with_context(|| parse_err("an integer"))?,
                "dim" => self.dim = value.parse().with_context(|| parse_err("an integer"))?,
                "max_evals" => {
                    self.max_evals = value.parse().with_context(|| parse_err("an integer"))?
                }
                "seed" => {
                    self.base_seed = value.parse().with_context(|| parse_err("an integer"))?
                }
                "param_policy" => self.param_policy = value.to_string(),
                "out" => self.output_dir = PathBuf::from(value),
                "tie_tol" => {
                    self.tie_tol = value.parse().with_context(|| parse_err("a real number"))?
                }
                "jobs" => self.jobs = value.parse().with_context(|| parse_err("an integer"))?,
                other => bail!("{}:{}: unknown key '{other}'", path.display(), lineno + 1),
            }
        }
        Ok(())
    }

    /// Checks every identifier and returns the resolved strategies/policy.
    pub fn resolve(&self) -> Result<(Vec<MutationStrategy>, ParamPolicy)> {
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        let mut strategies = Vec::new();
        for name in &self.strategies {
            let Some(strategy) = MutationStrategy::from_name(name) else {
                bail!(
                    "unknown strategy '{name}' (valid: {})",
                    MutationStrategy::NAMES.join(", ")
                );
            };
            strategies.push(strategy);
        }
        if strategies.is_empty() {
            bail!("no strategies selected");
        }
        for name in &self.functions {
            unionde::benchmarks::ObjectiveFunction::by_name(name, self.dim.max(1))?;
        }
        if self.functions.is_empty() {
            bail!("no functions selected");
        }
        let policy = ParamPolicy::parse(&self.param_policy)?;
        Ok((strategies, policy))
    }
}

pub fn split_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Seed of run `r` of `strategy` on `function`: a stable FNV-1a hash of the
/// base seed and the identifiers, so adding strategies or functions to a
/// campaign never changes existing rows.
pub fn campaign_seed(base_seed: u64, strategy: &str, function: &str, run: u32) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x1000_0000_01b3;
    let mut hash = OFFSET;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= u64::from(b);
            hash = hash.wrapping_mul(PRIME);
        }
    };
    eat(&base_seed.to_le_bytes());
    eat(strategy.as_bytes());
    eat(&[0x1f]);
    eat(function.as_bytes());
    eat(&[0x1f]);
    eat(&run.to_le_bytes());
    hash
}
