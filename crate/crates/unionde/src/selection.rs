//! Parent-selection criteria: fitness-rank weights, pairwise distance and
//! probability matrices over the population, and roulette-wheel sampling.
//!
//! Two complementary criteria are provided. The fitness-space criterion
//! ranks members from best to worst and gives rank `i` (1-based) the weight
//! `(NP - i) / NP`, so the best member carries the most mass and the worst
//! carries none. The design-space criterion weights candidate `j` for a
//! given member `i` by `1 - dm[i][j] / sum_k dm[i][k]`, so nearby members
//! are preferred.

use crate::core::{Population, RandomSource};
use crate::{Error, Result};

/// Fitness-space selection weights for one population snapshot.
///
/// Sorting is by fitness ascending with ties broken by the original member
/// index, which keeps runs deterministic under a fixed seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RankWeights {
    sorted_order: Vec<usize>,
    weight_of_rank: Vec<f64>,
    member_weight: Vec<f64>,
}

impl RankWeights {
    /// Member indices from best fitness to worst.
    pub fn sorted_order(&self) -> &[usize] {
        &self.sorted_order
    }

    /// Weight of rank `i` (0-based position in `sorted_order`):
    /// `(NP - 1 - i) / NP`. Strictly decreasing; the last entry is zero.
    pub fn weight_of_rank(&self) -> &[f64] {
        &self.weight_of_rank
    }

    /// Weights indexed by member, ready for roulette sampling.
    pub fn member_weights(&self) -> &[f64] {
        &self.member_weight
    }

    /// Total selection mass, `(NP - 1) / 2`, computed with compensated
    /// summation so it is exact and usable as a checksum.
    pub fn mass_total(&self) -> f64 {
        neumaier_sum(&self.weight_of_rank)
    }
}

fn neumaier_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for &x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            compensation += (sum - t) + x;
        } else {
            compensation += (x - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// Sorts the population from best to worst and assigns rank weights.
pub fn build_rank_weights(pop: &Population) -> RankWeights {
    let np = pop.np();
    let mut sorted_order: Vec<usize> = (0..np).collect();
    sorted_order.sort_by(|&a, &b| {
        pop.member(a)
            .fitness()
            .partial_cmp(&pop.member(b).fitness())
            .expect("fitness is never NaN")
            .then(a.cmp(&b))
    });
    let weight_of_rank: Vec<f64> = (0..np).map(|i| (np - 1 - i) as f64 / np as f64).collect();
    let mut member_weight = vec![0.0; np];
    for (rank, &member) in sorted_order.iter().enumerate() {
        member_weight[member] = weight_of_rank[rank];
    }
    RankWeights {
        sorted_order,
        weight_of_rank,
        member_weight,
    }
}

/// Symmetric matrix of pairwise Euclidean distances between member
/// positions, with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    np: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn np(&self) -> usize {
        self.np
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.np + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.np..(i + 1) * self.np]
    }

    fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.np + j] = value;
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Computes the full distance matrix; only the upper triangle is evaluated
/// and the lower triangle is mirrored from it.
pub fn build_distance_matrix(pop: &Population) -> DistanceMatrix {
    let np = pop.np();
    let mut dm = DistanceMatrix {
        np,
        data: vec![0.0; np * np],
    };
    for i in 0..np {
        for j in (i + 1)..np {
            let d = euclidean(
                pop.member(i).position().as_slice(),
                pop.member(j).position().as_slice(),
            );
            dm.set(i, j, d);
            dm.set(j, i, d);
        }
    }
    dm
}

/// Refreshes only the row and column of `replaced_index` after that member's
/// position changed; every other entry is left untouched.
///
/// Panics if `replaced_index` is out of range or the matrix and population
/// disagree on size.
pub fn update_after_replacement(dm: &mut DistanceMatrix, pop: &Population, replaced_index: usize) {
    assert_eq!(dm.np(), pop.np(), "matrix and population sizes differ");
    assert!(replaced_index < pop.np(), "replaced index out of range");
    let new_position = pop.member(replaced_index).position().as_slice();
    for j in 0..pop.np() {
        let d = if j == replaced_index {
            0.0
        } else {
            euclidean(new_position, pop.member(j).position().as_slice())
        };
        dm.set(replaced_index, j, d);
        dm.set(j, replaced_index, d);
    }
}

/// Design-space sampling weights for row `i`: `1 - dm[i][j] / sum_k dm[i][k]`
/// with the diagonal masked to zero, so closer members get more mass.
///
/// When every distance in the row is zero (a fully converged population) the
/// weights fall back to uniform over all `j != i`.
pub fn probability_row(dm: &DistanceMatrix, i: usize) -> Vec<f64> {
    assert!(i < dm.np(), "row index out of range");
    let row = dm.row(i);
    let total: f64 = row.iter().sum();
    if total > 0.0 {
        row.iter()
            .enumerate()
            .map(|(j, &d)| {
                if j == i {
                    0.0
                } else {
                    (1.0 - d / total).max(0.0)
                }
            })
            .collect()
    } else {
        (0..dm.np())
            .map(|j| if j == i { 0.0 } else { 1.0 })
            .collect()
    }
}

/// Draws `k` indices by roulette wheel over `weights`.
///
/// Excluded indices are never returned. Negative weights count as zero.
/// With `without_replacement`, each drawn index is removed from the wheel
/// before the next draw, so the result contains no duplicates. Should the
/// remaining candidates carry no positive mass, the draw falls back to
/// uniform over the remaining non-excluded candidates rather than aborting.
pub fn roulette_select(
    weights: &[f64],
    k: usize,
    without_replacement: bool,
    excluded: &[usize],
    rng: &mut RandomSource,
) -> Result<Vec<usize>> {
    let n = weights.len();
    let mut available: Vec<bool> = (0..n).map(|i| !excluded.contains(&i)).collect();
    let mut mass: Vec<f64> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| if available[i] { w.max(0.0) } else { 0.0 })
        .collect();
    let candidates = available.iter().filter(|&&a| a).count();
    let needed = if without_replacement { k } else { k.min(1) };
    if needed > candidates {
        return Err(Error::NotEnoughCandidates {
            requested: k,
            available: candidates,
        });
    }

    let mut picks = Vec::with_capacity(k);
    for _ in 0..k {
        let choice = match rng.weighted_index(&mass) {
            Some(index) => index,
            None => {
                // Uniform fallback over whatever candidates remain.
                let remaining: Vec<usize> = (0..n).filter(|&i| available[i]).collect();
                remaining[rng.int_inclusive(0, remaining.len() - 1)]
            }
        };
        picks.push(choice);
        if without_replacement {
            available[choice] = false;
            mass[choice] = 0.0;
        }
    }
    Ok(picks)
}
