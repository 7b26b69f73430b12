//! Self-adaptive control of the per-member scale factor and crossover rate,
//! plus a fixed-parameter policy for ablation runs.
//!
//! Each generation a member proposes trial parameters: with probability
//! `tau1` a fresh scale factor `F = F_l + rand * F_u` (so `F` lands in
//! `[0.1, 1.0]` at the default settings), otherwise the stored one; and
//! independently with probability `tau2` a fresh crossover rate uniform in
//! `[0, 1]`, otherwise the stored one. The trial parameters drive that
//! member's donor and crossover, and are adopted only when the trial vector
//! wins the selection.
//!
//! Draw order is fixed for reproducibility: the `F` gate, then the `F`
//! value (only when the gate fires), then the `CR` gate, then the `CR`
//! value (only when its gate fires).

use crate::core::{Individual, RandomSource};
use crate::{Error, Result};

/// Regeneration probabilities and the scale-factor range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JdeConfig {
    /// Probability of regenerating the scale factor.
    pub tau1: f64,
    /// Probability of regenerating the crossover rate.
    pub tau2: f64,
    /// Scale-factor floor.
    pub f_lower: f64,
    /// Scale-factor span; regenerated values lie in `[f_lower, f_lower + f_span]`.
    pub f_span: f64,
}

impl Default for JdeConfig {
    fn default() -> Self {
        Self {
            tau1: 0.1,
            tau2: 0.1,
            f_lower: 0.1,
            f_span: 0.9,
        }
    }
}

/// Proposes trial control parameters for one member.
pub fn propose_parameters(
    member: &Individual,
    cfg: &JdeConfig,
    rng: &mut RandomSource,
) -> (f64, f64) {
    let f_trial = if rng.uniform01() < cfg.tau1 {
        cfg.f_lower + rng.uniform01() * cfg.f_span
    } else {
        member.scale_factor()
    };
    let cr_trial = if rng.uniform01() < cfg.tau2 {
        rng.uniform01()
    } else {
        member.crossover_rate()
    };
    (f_trial, cr_trial)
}

/// Adopts the trial parameters into the member iff the trial vector won the
/// selection; otherwise the member keeps its stored parameters.
pub fn commit_parameters(member: &mut Individual, f_trial: f64, cr_trial: f64, trial_won: bool) {
    if trial_won {
        member.set_control_parameters(f_trial, cr_trial);
    }
}

/// Control-parameter policy of a run: self-adaptive or fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamPolicy {
    Jde(JdeConfig),
    Fixed { f: f64, cr: f64 },
}

impl ParamPolicy {
    /// Parses a policy identifier: `jde` or `fixed:F=<v>,CR=<v>`.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "jde" {
            return Ok(Self::Jde(JdeConfig::default()));
        }
        if let Some(rest) = s.strip_prefix("fixed:") {
            let mut f = None;
            let mut cr = None;
            for part in rest.split(',') {
                if let Some(v) = part.strip_prefix("F=") {
                    f = v.parse::<f64>().ok();
                } else if let Some(v) = part.strip_prefix("CR=") {
                    cr = v.parse::<f64>().ok();
                }
            }
            if let (Some(f), Some(cr)) = (f, cr) {
                if !(0.1..=1.0).contains(&f) {
                    return Err(Error::InvalidParameter {
                        name: "F",
                        value: f,
                        reason: "must lie in [0.1, 1.0]",
                    });
                }
                if !(0.0..=1.0).contains(&cr) {
                    return Err(Error::InvalidParameter {
                        name: "CR",
                        value: cr,
                        reason: "must lie in [0, 1]",
                    });
                }
                return Ok(Self::Fixed { f, cr });
            }
        }
        Err(Error::UnknownParamPolicy(s.to_string()))
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Jde(_) => "jde".to_string(),
            Self::Fixed { f, cr } => format!("fixed:F={f},CR={cr}"),
        }
    }

    /// Parameters every member starts the run with.
    pub fn initial_parameters(&self) -> (f64, f64) {
        match self {
            Self::Jde(_) => (0.5, 0.9),
            Self::Fixed { f, cr } => (*f, *cr),
        }
    }

    /// Trial parameters for one member this generation. The fixed policy
    /// consumes no draws.
    pub fn propose(&self, member: &Individual, rng: &mut RandomSource) -> (f64, f64) {
        match self {
            Self::Jde(cfg) => propose_parameters(member, cfg, rng),
            Self::Fixed { f, cr } => (*f, *cr),
        }
    }
}
