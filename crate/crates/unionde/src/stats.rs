//! Evaluation statistics: per-function mean errors, win/tie/lose counting,
//! and the two-sided Wilcoxon signed-rank test.
//!
//! Conventions for a comparison of algorithm A against algorithm B over
//! paired per-function errors (lower is better): differences are
//! `d = a - b`, so positive ranks accumulate where B did better. The
//! verdict is `+` when the test is significant and the rank mass favors B,
//! `-` when it favors A, and `=` otherwise.
//!
//! P-values are exact for up to 25 effective pairs: the null distribution
//! of the positive rank sum over all 2^n equiprobable sign assignments is
//! accumulated (ranks doubled to stay in integer arithmetic, which also
//! makes tied mid-ranks exact). Larger samples use the normal
//! approximation with continuity correction and the tied-rank variance
//! correction.

use crate::engine::RunResult;
use crate::{Error, Result};

/// Largest effective sample size for which the p-value is computed from
/// the exact null distribution.
pub const EXACT_LIMIT: usize = 25;

/// Per-function mean errors of two algorithms, paired by function.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl PairedSample {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        for (index, &value) in a.iter().chain(b.iter()).enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoordinate {
                    index: index % a.len().max(1),
                    value,
                });
            }
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }
}

/// Direction of a significant difference; `Plus` favors the second
/// algorithm of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Plus,
    Minus,
    Equal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Plus => "+",
            Verdict::Minus => "-",
            Verdict::Equal => "=",
        })
    }
}

/// Signed-rank test summary: mean and sum of each sign class, the
/// two-sided p-value, and the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonResult {
    pub mr_minus: f64,
    pub mr_plus: f64,
    pub sr_minus: f64,
    pub sr_plus: f64,
    pub p_value: f64,
    pub verdict: Verdict,
    /// Pairs remaining after zero differences are discarded.
    pub n_effective: usize,
    /// Set when fewer than five effective pairs remain; the verdict is
    /// forced to `Equal` in that case.
    pub underpowered: bool,
}

/// Arithmetic mean of the final errors. Panics on an empty slice.
pub fn mean_error(results: &[RunResult]) -> f64 {
    assert!(!results.is_empty(), "mean of zero runs is undefined");
    results.iter().map(|r| r.best_error).sum::<f64>() / results.len() as f64
}

/// Per-function outcome counts of B against A: `(win, tie, lose)` from B's
/// perspective, where differences within `tie_tol` count as ties.
///
/// Panics when the slices have different lengths.
pub fn win_tie_lose(a: &[f64], b: &[f64], tie_tol: f64) -> (usize, usize, usize) {
    assert_eq!(a.len(), b.len(), "per-function means must pair up");
    let mut win = 0;
    let mut tie = 0;
    let mut lose = 0;
    for (&ea, &eb) in a.iter().zip(b) {
        if (ea - eb).abs() <= tie_tol {
            tie += 1;
        } else if eb < ea {
            win += 1;
        } else {
            lose += 1;
        }
    }
    (win, tie, lose)
}

/// Two-sided Wilcoxon signed-rank test of `sample.a` against `sample.b` at
/// significance level `alpha`.
pub fn wilcoxon_signed_rank(sample: &PairedSample, alpha: f64) -> WilcoxonResult {
    let diffs: Vec<f64> = sample
        .a
        .iter()
        .zip(&sample.b)
        .map(|(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    let n = diffs.len();

    let ranks = midranks(&diffs);
    let mut sr_plus = 0.0;
    let mut sr_minus = 0.0;
    let mut n_plus = 0usize;
    let mut n_minus = 0usize;
    for (d, r) in diffs.iter().zip(&ranks) {
        if *d > 0.0 {
            sr_plus += r;
            n_plus += 1;
        } else {
            sr_minus += r;
            n_minus += 1;
        }
    }
    let mr_plus = if n_plus > 0 {
        sr_plus / n_plus as f64
    } else {
        0.0
    };
    let mr_minus = if n_minus > 0 {
        sr_minus / n_minus as f64
    } else {
        0.0
    };

    if n < 5 {
        return WilcoxonResult {
            mr_minus,
            mr_plus,
            sr_minus,
            sr_plus,
            p_value: 1.0,
            verdict: Verdict::Equal,
            n_effective: n,
            underpowered: true,
        };
    }

    let p_value = if n <= EXACT_LIMIT {
        exact_two_sided_p(&ranks, sr_plus.min(sr_minus))
    } else {
        normal_two_sided_p(&ranks, sr_plus.min(sr_minus))
    };

    let verdict = if p_value < alpha && sr_plus != sr_minus {
        if sr_plus > sr_minus {
            Verdict::Plus
        } else {
            Verdict::Minus
        }
    } else {
        Verdict::Equal
    };

    WilcoxonResult {
        mr_minus,
        mr_plus,
        sr_minus,
        sr_plus,
        p_value,
        verdict,
        n_effective: n,
        underpowered: false,
    }
}

/// Ranks of the absolute differences, ascending, with mid-ranks over ties.
/// Mid-ranks are multiples of one half, hence exact in floating point.
fn midranks(diffs: &[f64]) -> Vec<f64> {
    let n = diffs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        diffs[i]
            .abs()
            .partial_cmp(&diffs[j].abs())
            .expect("differences are finite")
    });
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && diffs[order[end + 1]].abs() == diffs[order[start]].abs() {
            end += 1;
        }
        // Average of 1-based positions start+1 ..= end+1.
        let midrank = (start + end + 2) as f64 / 2.0;
        for &idx in &order[start..=end] {
            ranks[idx] = midrank;
        }
        start = end + 1;
    }
    ranks
}

/// Exact two-sided p-value: the null distribution of the positive rank sum
/// over all 2^n sign assignments, tabulated over doubled ranks so every
/// value is an integer.
fn exact_two_sided_p(ranks: &[f64], w_low: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    // counts[s] = number of sign assignments whose positive doubled-rank
    // sum equals s. Counts stay far below 2^53, so f64 arithmetic is exact.
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    for &r in &doubled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let w2 = (2.0 * w_low).round() as usize;
    let at_or_below: f64 = counts[..=w2.min(total)].iter().sum();
    let assignments = (ranks.len() as f64).exp2();
    (2.0 * at_or_below / assignments).min(1.0)
}

/// Normal approximation with continuity correction and tied-rank variance
/// correction, used beyond [`EXACT_LIMIT`] pairs.
fn normal_two_sided_p(ranks: &[f64], w_low: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    // Subtract sum(t^3 - t)/48 over tie groups.
    let mut sorted: Vec<f64> = ranks.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        variance -= (t * t * t - t) / 48.0;
        i = j + 1;
    }
    if w_low >= mean || variance <= 0.0 {
        return 1.0;
    }
    let z = (w_low - mean + 0.5) / variance.sqrt();
    (2.0 * standard_normal_cdf(z)).min(1.0)
}

/// CDF of the standard normal via a rational erfc approximation, accurate
/// to about 1.2e-7 in relative error. Plenty for p-value reporting.
fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let ans = t
        * (-z * z - 1.26551223
            + t * (1.00002368
                + t * (0.37409196
                    + t * (0.09678418
                        + t * (-0.18628806
                            + t * (0.27886807
                                + t * (-1.13520398
                                    + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277)))))))))
            .exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paired(a: Vec<f64>, b: Vec<f64>) -> PairedSample {
        PairedSample::new(a, b).unwrap()
    }

    #[test]
    fn mean_error_basics() {
        let result = |e: f64| RunResult {
            best_error: e,
            evals_used: 1,
            trajectory: vec![(1, e)],
            seed: 0,
        };
        assert_eq!(mean_error(&[result(1.0), result(3.0)]), 2.0);
        assert_eq!(mean_error(&[result(0.5)]), 0.5);
        assert_eq!(mean_error(&vec![result(0.0); 50]), 0.0);
    }

    #[test]
    fn win_tie_lose_componentwise() {
        assert_eq!(
            win_tie_lose(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0], 0.0),
            (1, 1, 1)
        );
        assert_eq!(win_tie_lose(&[2.0, 3.0], &[2.0, 3.0], 0.0), (0, 2, 0));
        let a: Vec<f64> = (0..25).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..25).map(|i| i as f64 - 0.5).collect();
        let (w, t, l) = win_tie_lose(&a, &b, 0.0);
        assert_eq!(w + t + l, 25);
        assert_eq!((w, t, l), (25, 0, 0));
    }

    #[test]
    fn all_positive_differences_frozen_p() {
        // d = [1..5] all positive: the positive rank sum is maximal, and
        // the exact two-sided p over 2^5 assignments is 2/32.
        let result = paired(vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![0.0; 5]);
        let r = wilcoxon_signed_rank(&result, 0.05);
        assert_eq!(r.sr_plus, 15.0);
        assert_eq!(r.sr_minus, 0.0);
        assert!((r.p_value - 0.0625).abs() < 1e-12);
        // a - b negative means B did worse: the rank sums swap.
        let flipped = paired(vec![0.0; 5], vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let rf = wilcoxon_signed_rank(&flipped, 0.05);
        assert_eq!(rf.sr_plus, 0.0);
        assert_eq!(rf.sr_minus, 15.0);
        assert_eq!(rf.p_value, r.p_value);
        assert_eq!(rf.verdict, Verdict::Equal); // 0.0625 is not below 0.05
    }

    #[test]
    fn sign_flip_swaps_rank_sums() {
        let a = vec![2.0, -1.5, 3.25, 0.5, -4.0, 1.0, 6.5];
        let b = vec![0.0; 7];
        let r1 = wilcoxon_signed_rank(&paired(a.clone(), b.clone()), 0.05);
        let negated: Vec<f64> = a.iter().map(|v| -v).collect();
        let r2 = wilcoxon_signed_rank(&paired(negated, b), 0.05);
        assert_eq!(r1.sr_plus, r2.sr_minus);
        assert_eq!(r1.sr_minus, r2.sr_plus);
        assert_eq!(r1.p_value, r2.p_value);
    }

    #[test]
    fn zero_differences_underpowered() {
        let r = wilcoxon_signed_rank(&paired(vec![1.0; 8], vec![1.0; 8]), 0.05);
        assert_eq!(r.n_effective, 0);
        assert!(r.underpowered);
        assert_eq!(r.verdict, Verdict::Equal);
    }

    #[test]
    fn rank_sum_conservation() {
        let a = vec![3.0, -1.0, 2.0, 2.0, -5.0, 0.25, 8.0, -0.5, 1.5, 0.125];
        let r = wilcoxon_signed_rank(&paired(a, vec![0.0; 10]), 0.05);
        assert_eq!(r.sr_plus + r.sr_minus, 55.0); // 10 * 11 / 2
    }

    #[test]
    fn translation_invariance() {
        // Dyadic values keep the shifted differences bit-identical.
        let a = vec![0.25, 1.25, -0.75, 2.25, 0.875, -1.5, 0.0625];
        let b = vec![0.125, 1.5, -1.0, 1.75, 1.25, -1.0, 0.5];
        let r1 = wilcoxon_signed_rank(&paired(a.clone(), b.clone()), 0.05);
        let shift = 123.25;
        let a2: Vec<f64> = a.iter().map(|v| v + shift).collect();
        let b2: Vec<f64> = b.iter().map(|v| v + shift).collect();
        let r2 = wilcoxon_signed_rank(&paired(a2, b2), 0.05);
        assert_eq!(r1.sr_plus, r2.sr_plus);
        assert_eq!(r1.p_value, r2.p_value);
    }

    /// Literal enumeration over every sign assignment; independent of the
    /// tabulated distribution in the implementation.
    fn brute_force_two_sided_p(diffs: &[f64]) -> f64 {
        let ranks = midranks(diffs);
        let n = diffs.len();
        let sr_plus: f64 = diffs
            .iter()
            .zip(&ranks)
            .filter(|(d, _)| **d > 0.0)
            .map(|(_, r)| r)
            .sum();
        let sr_minus: f64 = ranks.iter().sum::<f64>() - sr_plus;
        let w_low = sr_plus.min(sr_minus);
        let mut at_or_below = 0u64;
        for mask in 0u64..(1 << n) {
            let mut w = 0.0;
            for (bit, r) in ranks.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    w += r;
                }
            }
            if w <= w_low + 1e-9 {
                at_or_below += 1;
            }
        }
        (2.0 * at_or_below as f64 / (1u64 << n) as f64).min(1.0)
    }

    #[test]
    fn exact_p_matches_brute_force_battery() {
        let mut rng = crate::core::RandomSource::new(99);
        for case in 0..100 {
            let n = 5 + (case % 6); // 5..=10
            let diffs: Vec<f64> = (0..n)
                .map(|_| {
                    let magnitude = (rng.int_inclusive(1, 6) as f64) / 2.0;
                    let sign = if rng.uniform01() < 0.5 { -1.0 } else { 1.0 };
                    sign * magnitude
                })
                .collect();
            let sample = paired(diffs.clone(), vec![0.0; n]);
            let r = wilcoxon_signed_rank(&sample, 0.05);
            let expected = brute_force_two_sided_p(&diffs);
            assert!(
                (r.p_value - expected).abs() <= 1e-12,
                "case {case}: {} vs {expected}",
                r.p_value
            );
            assert_eq!(
                r.sr_plus + r.sr_minus,
                (n * (n + 1)) as f64 / 2.0,
                "rank sum conservation in case {case}"
            );
        }
    }

    #[test]
    fn exact_and_normal_agree_in_the_overlap() {
        // Sanity band: for 10..=25 pairs the exact and approximate p-values
        // stay within 0.02 of each other.
        let mut rng = crate::core::RandomSource::new(7);
        for case in 0..40 {
            let n = 10 + (case % 16);
            let diffs: Vec<f64> = (0..n)
                .map(|_| rng.uniform_in(-1.0, 1.0))
                .filter(|d| *d != 0.0)
                .collect();
            let ranks = midranks(&diffs);
            let sr_plus: f64 = diffs
                .iter()
                .zip(&ranks)
                .filter(|(d, _)| **d > 0.0)
                .map(|(_, r)| r)
                .sum();
            let sr_minus: f64 = ranks.iter().sum::<f64>() - sr_plus;
            let w_low = sr_plus.min(sr_minus);
            let exact = exact_two_sided_p(&ranks, w_low);
            let approx = normal_two_sided_p(&ranks, w_low);
            assert!(
                (exact - approx).abs() < 0.02,
                "case {case}: exact {exact}, approx {approx}"
            );
        }
    }

    #[test]
    fn large_sample_uses_normal_path() {
        // B wins every one of 30 pairs: all differences positive.
        let n = 30;
        let a: Vec<f64> = (0..n).map(|i| (i + 1) as f64).collect();
        let b = vec![0.0; n];
        let r = wilcoxon_signed_rank(&paired(a, b), 0.05);
        assert_eq!(r.n_effective, 30);
        assert!(r.p_value < 0.001);
        assert_eq!(r.verdict, Verdict::Plus);
    }

    #[test]
    fn verdict_direction() {
        // B clearly better on 10 of 10 functions.
        let a: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let b = vec![0.0; 10];
        let r = wilcoxon_signed_rank(&paired(a.clone(), b.clone()), 0.05);
        assert_eq!(r.verdict, Verdict::Plus);
        assert!((r.p_value - 2.0 / 1024.0).abs() < 1e-12);
        let r_rev = wilcoxon_signed_rank(&paired(b, a), 0.05);
        assert_eq!(r_rev.verdict, Verdict::Minus);
    }

    #[test]
    fn table_scale_verdict_with_small_p() {
        // A 25-function comparison with two exact ties and four losses
        // (absolute-difference ranks 10, 15, 22, 23): the negative rank
        // sum is 70 of 276, giving an exact two-sided p of about 0.038 -
        // a significant "+" at the usual scale of such tables.
        let mut a = Vec::new();
        let mut b = Vec::new();
        for magnitude in 1..=23u32 {
            let d = magnitude as f64;
            if matches!(magnitude, 10 | 15 | 22 | 23) {
                a.push(0.0);
                b.push(d); // B worse here
            } else {
                a.push(d); // B better here
                b.push(0.0);
            }
        }
        a.extend([5.0, 6.0]);
        b.extend([5.0, 6.0]); // the two ties
        let r = wilcoxon_signed_rank(&paired(a, b), 0.05);
        assert_eq!(r.n_effective, 23);
        assert_eq!(r.sr_minus, 70.0);
        assert_eq!(r.sr_plus, 206.0);
        assert!((r.p_value - 0.03838014602661133).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Plus);
    }

    #[test]
    fn paired_sample_validation() {
        assert!(PairedSample::new(vec![1.0], vec![1.0, 2.0]).is_err());
        assert!(PairedSample::new(vec![f64::NAN], vec![1.0]).is_err());
        assert!(PairedSample::new(vec![1.0, 2.0], vec![0.5, 0.25]).is_ok());
    }
}
