//! The generational optimization loop.
//!
//! Each generation proceeds in two passes, so every trial vector is built
//! from the generation-start population: first all trials are constructed
//! (parameter proposal, parent selection, donor, crossover, bound repair),
//! then all trials are evaluated and each member is replaced iff its trial
//! is strictly better. Control parameters are adopted on success, and the
//! distance matrix - maintained only for strategies that select in design
//! space - is refreshed row/column-wise per replaced member after the
//! replacement pass.
//!
//! Draw order within a member's trial construction is fixed: parameter
//! proposal, parent selection, crossover index and mask, then bound repair.

use crate::benchmarks::ObjectiveFunction;
use crate::core::{init_population, repair_position, Individual, RandomSource, RealVector};
use crate::mutation::{make_donor, select_parents, MutationStrategy};
use crate::params::ParamPolicy;
use crate::selection::{build_distance_matrix, build_rank_weights, update_after_replacement};
use crate::{Error, Result};

/// Settings of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub np: usize,
    pub dim: usize,
    /// Evaluation budget; the run stops at the end of the generation in
    /// which the budget is reached, so the overshoot is below `np`.
    pub max_evals: u64,
    pub seed: u64,
    pub strategy: MutationStrategy,
    pub param_policy: ParamPolicy,
    /// Optional early stop once the best error falls to this value.
    pub target_error: Option<f64>,
}

impl RunConfig {
    /// Conventional defaults: `NP = 50`, `D = 30`, budget `D * 10_000`.
    pub fn new(strategy: MutationStrategy, seed: u64) -> Self {
        Self {
            np: 50,
            dim: 30,
            max_evals: 300_000,
            seed,
            strategy,
            param_policy: ParamPolicy::Jde(Default::default()),
            target_error: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let min = self.strategy.min_population();
        if self.np < min {
            return Err(Error::PopulationTooSmall {
                np: self.np,
                min,
                context: format!("strategy {}", self.strategy.name()),
            });
        }
        if self.max_evals < self.np as u64 {
            return Err(Error::InvalidParameter {
                name: "max_evals",
                value: self.max_evals as f64,
                reason: "must cover at least the initial population",
            });
        }
        Ok(())
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Best fitness minus the known optimum, or the best fitness itself
    /// when no optimum is declared.
    pub best_error: f64,
    pub evals_used: u64,
    /// `(evaluations, best fitness)` sampled after initialization and after
    /// every generation; non-increasing in the fitness component.
    pub trajectory: Vec<(u64, f64)>,
    pub seed: u64,
}

/// Binomial crossover: each coordinate comes from the donor with
/// probability `cr`, and the uniformly drawn coordinate `j_rand` always
/// does.
///
/// Consumes one integer draw plus exactly `D` uniform draws. Panics on
/// dimension mismatch.
pub fn binomial_crossover(
    parent: &RealVector,
    donor: &RealVector,
    cr: f64,
    rng: &mut RandomSource,
) -> RealVector {
    assert_eq!(
        parent.dim(),
        donor.dim(),
        "parent and donor dimensions differ"
    );
    let dim = parent.dim();
    let j_rand = rng.int_inclusive(0, dim - 1);
    let coords = (0..dim)
        .map(|j| {
            if rng.uniform01() < cr || j == j_rand {
                donor[j]
            } else {
                parent[j]
            }
        })
        .collect();
    RealVector::new(coords).expect("mix of finite coordinates is finite")
}

/// Executes the generational loop until the evaluation budget is exhausted
/// or the optional error target is reached.
///
/// Errors if the configuration is invalid or the objective ever returns
/// NaN; the NaN error carries the offending position.
pub fn run(config: &RunConfig, objective: &ObjectiveFunction) -> Result<RunResult> {
    config.validate()?;
    assert_eq!(
        objective.dim(),
        config.dim,
        "objective dimension does not match the configuration"
    );

    let mut rng = RandomSource::new(config.seed);
    let (f0, cr0) = config.param_policy.initial_parameters();
    let mut pop = init_population(
        config.np,
        objective.bounds(),
        |x| objective.evaluate(x),
        &mut rng,
        f0,
        cr0,
    )?;
    let mut evals = config.np as u64;

    let optimum = objective.optimum_value();
    let error_of = |fitness: f64| optimum.map_or(fitness, |o| fitness - o);
    let reached_target = |best_fitness: f64| {
        config
            .target_error
            .is_some_and(|t| error_of(best_fitness) <= t)
    };

    let mut trajectory = vec![(evals, pop.best().fitness())];
    let mut dm = config
        .strategy
        .uses_distance_matrix()
        .then(|| build_distance_matrix(&pop));

    while evals < config.max_evals && !reached_target(pop.best().fitness()) {
        let rank_weights = build_rank_weights(&pop);

        // Pass 1: build every trial from the generation-start population.
        let mut trials = Vec::with_capacity(pop.np());
        for i in 0..pop.np() {
            let (f_trial, cr_trial) = config.param_policy.propose(pop.member(i), &mut rng);
            let roles = select_parents(
                &config.strategy,
                &pop,
                i,
                &rank_weights,
                dm.as_ref(),
                &mut rng,
            )?;
            let donor = make_donor(&config.strategy, &pop, &roles, f_trial);
            let crossed = binomial_crossover(pop.member(i).position(), &donor, cr_trial, &mut rng);
            let trial = repair_position(&crossed, objective.bounds(), &mut rng);
            trials.push((trial, f_trial, cr_trial));
        }

        // Pass 2: evaluate and greedily replace; strict improvement only.
        let mut replaced = Vec::new();
        for (i, (trial, f_trial, cr_trial)) in trials.into_iter().enumerate() {
            let fitness = objective.evaluate(trial.as_slice());
            evals += 1;
            if fitness.is_nan() {
                return Err(Error::ObjectiveNan {
                    position: trial.into(),
                });
            }
            if fitness < pop.member(i).fitness() {
                pop.replace_member(i, Individual::new(trial, fitness, f_trial, cr_trial));
                replaced.push(i);
            }
        }
        if let Some(dm) = dm.as_mut() {
            for &i in &replaced {
                update_after_replacement(dm, &pop, i);
            }
        }
        pop.advance_generation();
        trajectory.push((evals, pop.best().fitness()));
    }

    Ok(RunResult {
        best_error: error_of(pop.best().fitness()),
        evals_used: evals,
        trajectory,
        seed: config.seed,
    })
}
