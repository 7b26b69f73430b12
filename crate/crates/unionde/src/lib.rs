//! Differential evolution with pluggable parent selection.
//!
//! This crate implements a differential-evolution optimizer whose mutation
//! strategies differ in how parent vectors are chosen: uniformly at random
//! (the classics), by tournament, by fitness-rank roulette, by design-space
//! proximity roulette, or - the headline strategy, `ude` - by a union of
//! the fitness and proximity criteria. Per-member scale factors and
//! crossover rates self-adapt with small regeneration probabilities.
//!
//! Alongside the engine it ships a benchmark suite of classic test
//! functions (with shifted variants and an external shift-file hook) and
//! the statistics used to compare strategies: per-function mean errors,
//! win/tie/lose counts, and the exact two-sided Wilcoxon signed-rank test.
//!
//! ```
//! use unionde::benchmarks::ObjectiveFunction;
//! use unionde::engine::{run, RunConfig};
//! use unionde::mutation::MutationStrategy;
//!
//! let sphere = ObjectiveFunction::by_name("sphere", 10).unwrap();
//! let mut config = RunConfig::new(MutationStrategy::Ude, 42);
//! config.dim = 10;
//! config.max_evals = 20_000;
//! let result = run(&config, &sphere).unwrap();
//! assert!(result.best_error < 1e-6);
//! ```

pub mod benchmarks;
pub mod core;
pub mod engine;
mod error;
pub mod mutation;
pub mod params;
pub mod selection;
pub mod stats;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

pub use crate::core::{Bounds, Individual, Population, RandomSource, RealVector};
pub use crate::engine::{RunConfig, RunResult};
pub use crate::mutation::MutationStrategy;
pub use crate::params::ParamPolicy;
