//! Donor-vector construction for every mutation strategy.
//!
//! A strategy is a parent-selection policy plus a donor formula. The
//! formulas all share one shape: a base vector plus one or two scaled
//! difference vectors,
//!
//! ```text
//! v = x[base] + c1 * (x[leading[0]] - x[terminal[0]])
//!             + c2 * (x[leading[1]] - x[terminal[1]])
//! ```
//!
//! What differs between strategies is how the role indices are chosen:
//! uniformly at random, by the best member, by tournament, by fitness-rank
//! roulette, by design-space (proximity) roulette, or - for the union
//! strategy - by a combination of the last two.
//!
//! For the current-to-X strategies the current member structurally occupies
//! both the base slot and the first terminal slot; everywhere else all role
//! indices are mutually distinct and distinct from the current member.

use crate::core::{Population, RandomSource, RealVector, MIN_POPULATION};
use crate::selection::{probability_row, roulette_select, DistanceMatrix, RankWeights};
use crate::{Error, Result};

/// Role assignment for one donor construction: the base vector plus the
/// leading (minuend) and terminal (subtrahend) index of each difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentRoles {
    pub base: usize,
    pub leading: Vec<usize>,
    pub terminal: Vec<usize>,
}

/// Parent-selection and donor-formula policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutationStrategy {
    /// Random base, one random difference.
    Rand1,
    /// Best member as base, one random difference.
    Best1,
    /// Random base, two random differences.
    Rand2,
    /// Best member as base, two random differences.
    Best2,
    /// Current member pulled toward the best, plus one random difference.
    CurrentToBest1,
    /// Random base pulled toward the best, plus one random difference.
    RandToBest1,
    /// Current member pulled toward a random member with weight `k_weight`,
    /// plus one difference scaled by `k_weight * F`.
    CurrentToRand1 { k_weight: f64 },
    /// Tournament selection: five random candidates, the fittest takes the
    /// base role, the rest fill the differences in draw order.
    Derl2,
    /// All five parents drawn by proximity roulette on the current member's
    /// distance row.
    Proximity2,
    /// Base and both leading parents drawn by fitness-rank roulette; both
    /// terminals random.
    Ranking2,
    /// Union selection: base and one leading parent by fitness-rank
    /// roulette, the other leading parent by proximity roulette, both
    /// terminals random.
    Ude,
}

impl MutationStrategy {
    /// Stable command-line identifiers, in listing order.
    pub const NAMES: [&'static str; 11] = [
        "rand1",
        "best1",
        "rand2",
        "best2",
        "current-to-best1",
        "rand-to-best1",
        "current-to-rand1",
        "derl2",
        "proximity2",
        "ranking2",
        "ude",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Rand1 => "rand1",
            Self::Best1 => "best1",
            Self::Rand2 => "rand2",
            Self::Best2 => "best2",
            Self::CurrentToBest1 => "current-to-best1",
            Self::RandToBest1 => "rand-to-best1",
            Self::CurrentToRand1 { .. } => "current-to-rand1",
            Self::Derl2 => "derl2",
            Self::Proximity2 => "proximity2",
            Self::Ranking2 => "ranking2",
            Self::Ude => "ude",
        }
    }

    /// Parses a stable identifier; `current-to-rand1` gets the default
    /// difference weight of 0.5.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "rand1" => Some(Self::Rand1),
            "best1" => Some(Self::Best1),
            "rand2" => Some(Self::Rand2),
            "best2" => Some(Self::Best2),
            "current-to-best1" => Some(Self::CurrentToBest1),
            "rand-to-best1" => Some(Self::RandToBest1),
            "current-to-rand1" => Some(Self::CurrentToRand1 { k_weight: 0.5 }),
            "derl2" => Some(Self::Derl2),
            "proximity2" => Some(Self::Proximity2),
            "ranking2" => Some(Self::Ranking2),
            "ude" => Some(Self::Ude),
            _ => None,
        }
    }

    pub fn all() -> Vec<Self> {
        Self::NAMES
            .iter()
            .map(|n| Self::from_name(n).expect("registry names parse"))
            .collect()
    }

    /// Number of distinct non-current indices the strategy must draw.
    fn distinct_parents(&self) -> usize {
        match self {
            Self::Rand1 | Self::Best1 | Self::CurrentToBest1 | Self::CurrentToRand1 { .. } => 3,
            Self::RandToBest1 => 4,
            Self::Rand2
            | Self::Best2
            | Self::Derl2
            | Self::Proximity2
            | Self::Ranking2
            | Self::Ude => 5,
        }
    }

    /// Smallest population the strategy can run on with strict parent
    /// distinctness.
    pub fn min_population(&self) -> usize {
        MIN_POPULATION.max(self.distinct_parents() + 1)
    }

    pub fn uses_distance_matrix(&self) -> bool {
        matches!(self, Self::Proximity2 | Self::Ude)
    }

    pub fn uses_rank_weights(&self) -> bool {
        matches!(self, Self::Ranking2 | Self::Ude)
    }

    /// Scale coefficients of the difference terms, in formula order.
    fn difference_coefficients(&self, f: f64) -> Vec<f64> {
        match self {
            Self::Rand1 | Self::Best1 => vec![f],
            Self::CurrentToRand1 { k_weight } => vec![*k_weight, *k_weight * f],
            _ => vec![f, f],
        }
    }
}

/// Draws `count` mutually distinct indices in `[0, np)`, none of them in
/// `excluded`, by rejection sampling.
fn draw_distinct(
    rng: &mut RandomSource,
    np: usize,
    count: usize,
    excluded: &[usize],
) -> Vec<usize> {
    let mut picks: Vec<usize> = Vec::with_capacity(count);
    while picks.len() < count {
        let candidate = rng.int_inclusive(0, np - 1);
        if !excluded.contains(&candidate) && !picks.contains(&candidate) {
            picks.push(candidate);
        }
    }
    picks
}

/// Chooses the parents for one donor construction of `current`.
///
/// `dm` is required for the strategies that select in design space
/// ([`MutationStrategy::uses_distance_matrix`]); other strategies ignore it.
/// Draw order is fixed per strategy and, for the union strategy, is:
/// fitness-space pair, role coin flip, design-space pick, then the random
/// terminals, each pick excluding all previous ones and `current`.
pub fn select_parents(
    strategy: &MutationStrategy,
    pop: &Population,
    current: usize,
    rank_weights: &RankWeights,
    dm: Option<&DistanceMatrix>,
    rng: &mut RandomSource,
) -> Result<ParentRoles> {
    let np = pop.np();
    assert!(current < np, "current index out of range");
    if np < strategy.min_population() {
        return Err(Error::PopulationTooSmall {
            np,
            min: strategy.min_population(),
            context: format!("strategy {}", strategy.name()),
        });
    }
    let best = pop.best_index();

    let roles = match strategy {
        MutationStrategy::Rand1 => {
            let r = draw_distinct(rng, np, 3, &[current]);
            ParentRoles {
                base: r[0],
                leading: vec![r[1]],
                terminal: vec![r[2]],
            }
        }
        MutationStrategy::Best1 => {
            let r = draw_distinct(rng, np, 2, &[current, best]);
            ParentRoles {
                base: best,
                leading: vec![r[0]],
                terminal: vec![r[1]],
            }
        }
        MutationStrategy::Rand2 => {
            let r = draw_distinct(rng, np, 5, &[current]);
            ParentRoles {
                base: r[0],
                leading: vec![r[1], r[3]],
                terminal: vec![r[2], r[4]],
            }
        }
        MutationStrategy::Best2 => {
            let r = draw_distinct(rng, np, 4, &[current, best]);
            ParentRoles {
                base: best,
                leading: vec![r[0], r[2]],
                terminal: vec![r[1], r[3]],
            }
        }
        MutationStrategy::CurrentToBest1 => {
            let r = draw_distinct(rng, np, 2, &[current, best]);
            ParentRoles {
                base: current,
                leading: vec![best, r[0]],
                terminal: vec![current, r[1]],
            }
        }
        MutationStrategy::RandToBest1 => {
            let r = draw_distinct(rng, np, 3, &[current, best]);
            ParentRoles {
                base: r[0],
                leading: vec![best, r[1]],
                terminal: vec![r[0], r[2]],
            }
        }
        MutationStrategy::CurrentToRand1 { .. } => {
            let r = draw_distinct(rng, np, 3, &[current]);
            ParentRoles {
                base: current,
                leading: vec![r[0], r[1]],
                terminal: vec![current, r[2]],
            }
        }
        MutationStrategy::Derl2 => {
            let candidates = draw_distinct(rng, np, 5, &[current]);
            // Tournament: the fittest candidate takes the base role (first
            // drawn wins ties); the rest keep their draw order.
            let winner = candidates
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    pop.member(a)
                        .fitness()
                        .partial_cmp(&pop.member(b).fitness())
                        .expect("fitness is never NaN")
                })
                .expect("five candidates");
            let rest: Vec<usize> = candidates.into_iter().filter(|&c| c != winner).collect();
            ParentRoles {
                base: winner,
                leading: vec![rest[0], rest[2]],
                terminal: vec![rest[1], rest[3]],
            }
        }
        MutationStrategy::Proximity2 => {
            let dm = dm.expect("proximity2 requires a distance matrix");
            let row = probability_row(dm, current);
            let p = roulette_select(&row, 5, true, &[current], rng)?;
            ParentRoles {
                base: p[0],
                leading: vec![p[1], p[3]],
                terminal: vec![p[2], p[4]],
            }
        }
        MutationStrategy::Ranking2 => {
            let picks = roulette_select(rank_weights.member_weights(), 3, true, &[current], rng)?;
            let t = draw_distinct(rng, np, 2, &[current, picks[0], picks[1], picks[2]]);
            ParentRoles {
                base: picks[0],
                leading: vec![picks[1], picks[2]],
                terminal: vec![t[0], t[1]],
            }
        }
        MutationStrategy::Ude => {
            let fs = roulette_select(rank_weights.member_weights(), 2, true, &[current], rng)?;
            // The two fitness-space picks are assigned to the base and
            // leading slots at random.
            let (fs1, fs2) = if rng.uniform01() < 0.5 {
                (fs[0], fs[1])
            } else {
                (fs[1], fs[0])
            };
            let dm = dm.expect("ude requires a distance matrix");
            let row = probability_row(dm, current);
            let ds = roulette_select(&row, 1, true, &[current, fs1, fs2], rng)?[0];
            let r = draw_distinct(rng, np, 2, &[current, fs1, fs2, ds]);
            ParentRoles {
                base: fs1,
                leading: vec![fs2, ds],
                terminal: vec![r[0], r[1]],
            }
        }
    };
    Ok(roles)
}

/// Evaluates the strategy's donor formula over the selected roles.
///
/// No bound repair happens here; out-of-box donors are the engine's job.
/// Panics if the role arity does not match the strategy.
pub fn make_donor(
    strategy: &MutationStrategy,
    pop: &Population,
    roles: &ParentRoles,
    f: f64,
) -> RealVector {
    let coefficients = strategy.difference_coefficients(f);
    assert_eq!(
        roles.leading.len(),
        coefficients.len(),
        "role arity does not match strategy {}",
        strategy.name()
    );
    assert_eq!(roles.leading.len(), roles.terminal.len());

    let dim = pop.dim();
    let mut donor: Vec<f64> = pop.member(roles.base).position().as_slice().to_vec();
    for (t, &c) in coefficients.iter().enumerate() {
        let lead = pop.member(roles.leading[t]).position().as_slice();
        let term = pop.member(roles.terminal[t]).position().as_slice();
        for j in 0..dim {
            donor[j] += c * (lead[j] - term[j]);
        }
    }
    RealVector::new(donor).expect("finite parents and coefficients give a finite donor")
}
