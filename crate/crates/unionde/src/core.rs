//! Domain types shared by every other module: decision-space vectors, box
//! bounds, population members, and the deterministic random source.
//!
//! All randomness in a run flows through one [`RandomSource`]; two runs with
//! the same seed draw identical sequences on every platform.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Smallest population size accepted anywhere in the library.
pub const MIN_POPULATION: usize = 5;

/// A point in the decision space.
///
/// Length is fixed at construction and every coordinate is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVector {
    coords: Vec<f64>,
}

impl RealVector {
    /// Wraps a coordinate vector, rejecting NaN and infinite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoordinate { index, value });
            }
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.coords.iter()
    }
}

impl std::ops::Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, j: usize) -> &f64 {
        &self.coords[j]
    }
}

impl From<RealVector> for Vec<f64> {
    fn from(v: RealVector) -> Vec<f64> {
        v.coords
    }
}

/// Per-dimension box constraints: `lower[j] < upper[j]` for every `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: RealVector,
    upper: RealVector,
}

impl Bounds {
    pub fn new(lower: RealVector, upper: RealVector) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::InvalidBounds(format!(
                "lower has {} dimensions, upper has {}",
                lower.dim(),
                upper.dim()
            )));
        }
        for j in 0..lower.dim() {
            if lower[j] >= upper[j] {
                return Err(Error::InvalidBounds(format!(
                    "lower[{j}]={} is not below upper[{j}]={}",
                    lower[j], upper[j]
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The common case of one scalar interval applied to every dimension.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(
            RealVector::new(vec![lower; dim])?,
            RealVector::new(vec![upper; dim])?,
        )
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &RealVector {
        &self.lower
    }

    pub fn upper(&self) -> &RealVector {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .enumerate()
                .all(|(j, &v)| self.lower[j] <= v && v <= self.upper[j])
    }
}

/// One population member: a position, its (always current) objective value,
/// and the member-local control parameters used by self-adaptation.
///
/// Fitness is set only at construction; there is no fitness mutator, so a
/// member's fitness can never go stale relative to its position.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    position: RealVector,
    fitness: f64,
    scale_factor: f64,
    crossover_rate: f64,
}

impl Individual {
    /// Builds a member from an evaluated position.
    ///
    /// Panics if `fitness` is NaN, `scale_factor` is outside `[0.1, 1.0]`
    /// (the range the self-adaptive regeneration rule can produce), or
    /// `crossover_rate` is outside `[0, 1]`.
    pub fn new(position: RealVector, fitness: f64, scale_factor: f64, crossover_rate: f64) -> Self {
        assert!(!fitness.is_nan(), "fitness must not be NaN");
        assert!(
            (0.1..=1.0).contains(&scale_factor),
            "scale factor {scale_factor} outside [0.1, 1.0]"
        );
        assert!(
            (0.0..=1.0).contains(&crossover_rate),
            "crossover rate {crossover_rate} outside [0, 1]"
        );
        Self {
            position,
            fitness,
            scale_factor,
            crossover_rate,
        }
    }

    pub fn position(&self) -> &RealVector {
        &self.position
    }

    pub fn fitness(&self) -> f64 {
        self.fitness
    }

    pub fn scale_factor(&self) -> f64 {
        self.scale_factor
    }

    pub fn crossover_rate(&self) -> f64 {
        self.crossover_rate
    }

    pub(crate) fn set_control_parameters(&mut self, scale_factor: f64, crossover_rate: f64) {
        assert!(
            (0.1..=1.0).contains(&scale_factor),
            "scale factor {scale_factor} outside [0.1, 1.0]"
        );
        assert!(
            (0.0..=1.0).contains(&crossover_rate),
            "crossover rate {crossover_rate} outside [0, 1]"
        );
        self.scale_factor = scale_factor;
        self.crossover_rate = crossover_rate;
    }
}

/// An ordered, fixed-size collection of members with a generation counter
/// and an always-correct index of the best (lowest-fitness) member.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
    generation: u64,
    best_index: usize,
}

impl Population {
    /// Assembles a population from evaluated members.
    ///
    /// Panics on an empty member list or mixed dimensions. Size minimums
    /// are enforced where they matter: [`init_population`] requires
    /// [`MIN_POPULATION`] members and every mutation strategy checks its
    /// own arity.
    pub fn new(members: Vec<Individual>) -> Self {
        assert!(!members.is_empty(), "a population needs members");
        let dim = members[0].position().dim();
        assert!(
            members.iter().all(|m| m.position().dim() == dim),
            "all members must share one dimension"
        );
        let best_index = argmin_fitness(&members);
        Self {
            members,
            generation: 0,
            best_index,
        }
    }

    pub fn np(&self) -> usize {
        self.members.len()
    }

    pub fn dim(&self) -> usize {
        self.members[0].position().dim()
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn best_index(&self) -> usize {
        self.best_index
    }

    pub fn best(&self) -> &Individual {
        &self.members[self.best_index]
    }

    pub fn member(&self, i: usize) -> &Individual {
        &self.members[i]
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    /// Swaps in a new member at `i`, keeping `best_index` correct.
    pub fn replace_member(&mut self, i: usize, member: Individual) {
        assert_eq!(
            member.position().dim(),
            self.dim(),
            "replacement member has a different dimension"
        );
        self.members[i] = member;
        if self.members[i].fitness() < self.members[self.best_index].fitness() {
            self.best_index = i;
        } else if i == self.best_index {
            self.best_index = argmin_fitness(&self.members);
        }
    }

    pub fn advance_generation(&mut self) {
        self.generation += 1;
    }
}

fn argmin_fitness(members: &[Individual]) -> usize {
    let mut best = 0;
    for (i, m) in members.iter().enumerate().skip(1) {
        if m.fitness() < members[best].fitness() {
            best = i;
        }
    }
    best
}

/// Deterministic random source: one per run.
///
/// Identical seeds produce identical draw sequences across runs and
/// platforms. All conversions from raw generator output to draws are
/// implemented here so the sequence never depends on upstream library
/// internals.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
    seed: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform real in `[0, 1)` with 53 bits of precision.
    pub fn uniform01(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform real in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo < hi);
        lo + self.uniform01() * (hi - lo)
    }

    /// Uniform integer in the inclusive range `[lo, hi]`, unbiased
    /// (Lemire's multiply-shift rejection).
    pub fn int_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi, "empty integer range [{lo}, {hi}]");
        let span = (hi - lo) as u64 + 1;
        let mut m = u128::from(self.rng.next_u64()) * u128::from(span);
        let mut low_bits = m as u64;
        if low_bits < span {
            let threshold = span.wrapping_neg() % span;
            while low_bits < threshold {
                m = u128::from(self.rng.next_u64()) * u128::from(span);
                low_bits = m as u64;
            }
        }
        lo + (m >> 64) as usize
    }

    /// Draws an index with probability proportional to `weights[i]`.
    ///
    /// Negative weights are treated as zero. Returns `None` when no positive
    /// mass remains, leaving the fallback policy to the caller. Consumes
    /// exactly one uniform draw when it succeeds.
    pub fn weighted_index(&mut self, weights: &[f64]) -> Option<usize> {
        let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
        if !total.is_finite() || total <= 0.0 {
            return None;
        }
        let target = self.uniform01() * total;
        let mut acc = 0.0;
        let mut last_positive = None;
        for (i, &w) in weights.iter().enumerate() {
            let w = w.max(0.0);
            if w > 0.0 {
                acc += w;
                last_positive = Some(i);
                if target < acc {
                    return Some(i);
                }
            }
        }
        // Rounding can leave `target` marginally above the accumulated sum.
        last_positive
    }
}

/// Returns `position` with every out-of-bounds coordinate resampled
/// uniformly inside its bound interval; in-range coordinates are returned
/// unchanged.
///
/// Panics if `position` and `bounds` disagree on dimension.
pub fn repair_position(
    position: &RealVector,
    bounds: &Bounds,
    rng: &mut RandomSource,
) -> RealVector {
    assert_eq!(
        position.dim(),
        bounds.dim(),
        "position and bounds disagree on dimension"
    );
    let coords = position
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let (lo, hi) = (bounds.lower()[j], bounds.upper()[j]);
            if lo <= v && v <= hi {
                v
            } else {
                rng.uniform_in(lo, hi)
            }
        })
        .collect();
    RealVector::new(coords).expect("uniform draws are finite")
}

/// Generates `np` members uniformly inside `bounds`, evaluates each one, and
/// seeds every member with the control parameters `(f0, cr0)`.
///
/// Consumes exactly `np * D` uniform draws and `np` objective evaluations.
pub fn init_population<F>(
    np: usize,
    bounds: &Bounds,
    objective: F,
    rng: &mut RandomSource,
    f0: f64,
    cr0: f64,
) -> Result<Population>
where
    F: Fn(&[f64]) -> f64,
{
    if np < MIN_POPULATION {
        return Err(Error::PopulationTooSmall {
            np,
            min: MIN_POPULATION,
            context: "population initialization".to_string(),
        });
    }
    let dim = bounds.dim();
    let mut members = Vec::with_capacity(np);
    for _ in 0..np {
        let coords: Vec<f64> = (0..dim)
            .map(|j| rng.uniform_in(bounds.lower()[j], bounds.upper()[j]))
            .collect();
        let fitness = objective(&coords);
        if fitness.is_nan() {
            return Err(Error::ObjectiveNan { position: coords });
        }
        let position = RealVector::new(coords).expect("uniform draws are finite");
        members.push(Individual::new(position, fitness, f0, cr0));
    }
    Ok(Population::new(members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn real_vector_rejects_non_finite() {
        assert!(RealVector::new(vec![0.0, f64::NAN]).is_err());
        assert!(RealVector::new(vec![f64::INFINITY]).is_err());
        assert!(RealVector::new(vec![1.0, -2.5]).is_ok());
    }

    #[test]
    fn bounds_require_lower_below_upper() {
        assert!(Bounds::uniform(3, 0.0, 1.0).is_ok());
        assert!(Bounds::uniform(3, 1.0, 1.0).is_err());
        assert!(Bounds::new(
            RealVector::new(vec![0.0]).unwrap(),
            RealVector::new(vec![1.0, 2.0]).unwrap()
        )
        .is_err());
    }

    #[test]
    fn repair_keeps_in_range_coordinates() {
        let bounds = Bounds::uniform(2, 0.0, 1.0).unwrap();
        let mut rng = RandomSource::new(1);
        let pos = RealVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(repair_position(&pos, &bounds, &mut rng), pos);
    }

    #[test]
    fn repair_touches_only_violated_coordinates() {
        let bounds = Bounds::uniform(2, 0.0, 1.0).unwrap();
        let mut rng = RandomSource::new(2);
        let pos = RealVector::new(vec![1.5, 0.5]).unwrap();
        let fixed = repair_position(&pos, &bounds, &mut rng);
        assert!((0.0..=1.0).contains(&fixed[0]));
        assert_eq!(fixed[1], 0.5);
    }

    #[test]
    fn repair_resamples_uniformly() {
        // Kolmogorov-Smirnov check of the resampled coordinate against
        // U[0, 1], alpha = 0.01.
        let bounds = Bounds::uniform(2, 0.0, 1.0).unwrap();
        let mut rng = RandomSource::new(3);
        let pos = RealVector::new(vec![-2.0, 3.0]).unwrap();
        let n = 100_000;
        let mut first = Vec::with_capacity(n);
        let mut second = Vec::with_capacity(n);
        for _ in 0..n {
            let fixed = repair_position(&pos, &bounds, &mut rng);
            assert!(bounds.contains(fixed.as_slice()));
            first.push(fixed[0]);
            second.push(fixed[1]);
        }
        for sample in [first, second] {
            let d = ks_distance_from_uniform(sample);
            let critical = 1.62762 / (n as f64).sqrt();
            assert!(d < critical, "KS distance {d} exceeds {critical}");
        }
    }

    fn ks_distance_from_uniform(mut sample: Vec<f64>) -> f64 {
        sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = sample.len() as f64;
        sample
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let lo = i as f64 / n;
                let hi = (i + 1) as f64 / n;
                (x - lo).abs().max((hi - x).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn init_population_counts_and_bounds() {
        let bounds = Bounds::uniform(30, -100.0, 100.0).unwrap();
        let mut rng = RandomSource::new(7);
        let evals = std::cell::Cell::new(0usize);
        let pop = init_population(
            50,
            &bounds,
            |x| {
                evals.set(evals.get() + 1);
                sphere(x)
            },
            &mut rng,
            0.5,
            0.9,
        )
        .unwrap();
        assert_eq!(pop.np(), 50);
        assert_eq!(evals.get(), 50);
        assert_eq!(pop.generation(), 0);
        for m in pop.members() {
            assert!(bounds.contains(m.position().as_slice()));
            assert_eq!(m.scale_factor(), 0.5);
            assert_eq!(m.crossover_rate(), 0.9);
        }
        let best = pop.best_index();
        assert!(pop
            .members()
            .iter()
            .all(|m| pop.member(best).fitness() <= m.fitness()));
    }

    #[test]
    fn init_population_rejects_tiny_np() {
        let bounds = Bounds::uniform(2, 0.0, 1.0).unwrap();
        let mut rng = RandomSource::new(8);
        assert!(matches!(
            init_population(4, &bounds, sphere, &mut rng, 0.5, 0.9),
            Err(Error::PopulationTooSmall { .. })
        ));
        assert!(init_population(5, &bounds, sphere, &mut rng, 0.5, 0.9).is_ok());
    }

    #[test]
    fn same_seed_same_population() {
        let bounds = Bounds::uniform(6, -3.0, 3.0).unwrap();
        let mut a = RandomSource::new(99);
        let mut b = RandomSource::new(99);
        let pa = init_population(10, &bounds, sphere, &mut a, 0.5, 0.9).unwrap();
        let pb = init_population(10, &bounds, sphere, &mut b, 0.5, 0.9).unwrap();
        assert_eq!(pa, pb);
    }

    #[test]
    fn replace_member_tracks_best() {
        let bounds = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let mut rng = RandomSource::new(11);
        let mut pop = init_population(5, &bounds, sphere, &mut rng, 0.5, 0.9).unwrap();
        let victim = (pop.best_index() + 1) % pop.np();
        let incumbent_best = pop.best().fitness();
        let pos = RealVector::new(vec![0.0, 0.0]).unwrap();
        pop.replace_member(victim, Individual::new(pos, 0.0, 0.5, 0.9));
        assert_eq!(pop.best_index(), victim);
        assert!(pop.best().fitness() <= incumbent_best);
    }

    #[test]
    fn weighted_index_degenerate_mass() {
        let mut rng = RandomSource::new(21);
        for _ in 0..100 {
            assert_eq!(rng.weighted_index(&[0.0, 0.0, 1.0]), Some(2));
        }
        assert_eq!(rng.weighted_index(&[0.0, 0.0]), None);
        assert_eq!(rng.weighted_index(&[-1.0, -0.5]), None);
    }

    #[test]
    fn int_inclusive_covers_range() {
        let mut rng = RandomSource::new(22);
        let mut seen = [false; 5];
        for _ in 0..1000 {
            let v = rng.int_inclusive(2, 6);
            assert!((2..=6).contains(&v));
            seen[v - 2] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(rng.int_inclusive(3, 3), 3);
    }

    proptest! {
        #[test]
        fn repair_always_lands_in_bounds(
            seed in 0u64..1000,
            coords in proptest::collection::vec(-1e3f64..1e3, 1..20),
        ) {
            let bounds = Bounds::uniform(coords.len(), -10.0, 10.0).unwrap();
            let mut rng = RandomSource::new(seed);
            let pos = RealVector::new(coords).unwrap();
            let fixed = repair_position(&pos, &bounds, &mut rng);
            prop_assert!(bounds.contains(fixed.as_slice()));
            for j in 0..pos.dim() {
                if bounds.lower()[j] <= pos[j] && pos[j] <= bounds.upper()[j] {
                    prop_assert_eq!(fixed[j], pos[j]);
                }
            }
        }
    }
}
