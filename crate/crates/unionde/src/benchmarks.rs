//! Black-box objective functions: classic unimodal and multimodal test
//! problems plus shifted variants with seed-fixed internal shift vectors,
//! a loader for externally supplied shift data, and a hook for arbitrary
//! user-defined objectives.
//!
//! Every function is minimized, deterministic, and total on its bound box.
//! Where the optimum is known, the declared optimizer evaluates to the
//! declared optimum value within 1e-10.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::core::{Bounds, RandomSource, RealVector};
use crate::{Error, Result};

/// `x* = argmax x sin(sqrt(x))` on [420, 421], the per-dimension optimizer
/// of the sine-modulated Schwefel function; the offset constant below makes
/// the optimum value zero.
const SCHWEFEL_SINE_OPTIMIZER: f64 = 420.968746359982;
const SCHWEFEL_SINE_OFFSET: f64 = 418.98288727243374;

type CustomEval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum FunctionKind {
    Sphere,
    DoubleSum,
    Rosenbrock,
    Rastrigin,
    Ackley,
    Griewank,
    SchwefelSine,
    Custom(CustomEval),
}

impl fmt::Debug for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            Self::Sphere => "Sphere",
            Self::DoubleSum => "DoubleSum",
            Self::Rosenbrock => "Rosenbrock",
            Self::Rastrigin => "Rastrigin",
            Self::Ackley => "Ackley",
            Self::Griewank => "Griewank",
            Self::SchwefelSine => "SchwefelSine",
            Self::Custom(_) => "Custom",
        };
        f.write_str(label)
    }
}

impl FunctionKind {
    fn evaluate(&self, z: &[f64]) -> f64 {
        let d = z.len() as f64;
        match self {
            Self::Sphere => z.iter().map(|v| v * v).sum(),
            Self::DoubleSum => {
                // Sum of squared prefix sums.
                let mut prefix = 0.0;
                let mut acc = 0.0;
                for &v in z {
                    prefix += v;
                    acc += prefix * prefix;
                }
                acc
            }
            Self::Rosenbrock => z
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            Self::Rastrigin => {
                10.0 * d
                    + z.iter()
                        .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos())
                        .sum::<f64>()
            }
            Self::Ackley => {
                let sum_sq: f64 = z.iter().map(|v| v * v).sum();
                let sum_cos: f64 = z
                    .iter()
                    .map(|v| (2.0 * std::f64::consts::PI * v).cos())
                    .sum();
                -20.0 * (-0.2 * (sum_sq / d).sqrt()).exp() - (sum_cos / d).exp()
                    + 20.0
                    + std::f64::consts::E
            }
            Self::Griewank => {
                let sum_sq: f64 = z.iter().map(|v| v * v).sum();
                let product: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum_sq / 4000.0 - product + 1.0
            }
            Self::SchwefelSine => {
                SCHWEFEL_SINE_OFFSET * d - z.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
            }
            Self::Custom(f) => f(z),
        }
    }

    fn conventional_box(&self) -> (f64, f64) {
        match self {
            Self::Sphere | Self::DoubleSum => (-100.0, 100.0),
            Self::Rosenbrock => (-30.0, 30.0),
            Self::Rastrigin => (-5.12, 5.12),
            Self::Ackley => (-32.0, 32.0),
            Self::Griewank => (-600.0, 600.0),
            Self::SchwefelSine => (-500.0, 500.0),
            Self::Custom(_) => unreachable!("custom objectives carry their own bounds"),
        }
    }

    fn base_optimizer(&self, dim: usize) -> Vec<f64> {
        match self {
            Self::Rosenbrock => vec![1.0; dim],
            Self::SchwefelSine => vec![SCHWEFEL_SINE_OPTIMIZER; dim],
            _ => vec![0.0; dim],
        }
    }
}

/// A minimization objective with bounds, a known optimum where one exists,
/// and an optional shift of the whole landscape.
#[derive(Debug, Clone)]
pub struct ObjectiveFunction {
    name: String,
    dim: usize,
    bounds: Bounds,
    kind: FunctionKind,
    shift: Option<RealVector>,
    optimum_value: Option<f64>,
    optimizer: Option<RealVector>,
}

impl ObjectiveFunction {
    fn base(kind: FunctionKind, name: &str, dim: usize) -> Self {
        assert!(dim >= 1, "objective needs at least one dimension");
        let (lo, hi) = kind.conventional_box();
        let optimizer = kind.base_optimizer(dim);
        Self {
            name: name.to_string(),
            dim,
            bounds: Bounds::uniform(dim, lo, hi).expect("conventional box is valid"),
            kind,
            shift: None,
            optimum_value: Some(0.0),
            optimizer: Some(RealVector::new(optimizer).expect("optimizer is finite")),
        }
    }

    /// An internally shifted variant. The shift is drawn uniformly inside
    /// half the bound box from a fixed seed, so the optimizer stays in
    /// bounds and the landscape is identical on every platform.
    fn shifted(kind: FunctionKind, name: &str, dim: usize, shift_seed: u64) -> Self {
        let base = Self::base(kind, name, dim);
        let mut rng = RandomSource::new(shift_seed);
        let shift: Vec<f64> = (0..dim)
            .map(|j| rng.uniform_in(base.bounds.lower()[j] * 0.5, base.bounds.upper()[j] * 0.5))
            .collect();
        base.with_shift(RealVector::new(shift).expect("uniform draws are finite"))
            .expect("generated shift matches dimension")
    }

    /// Wraps an arbitrary objective with explicit bounds and, optionally,
    /// a known optimum value.
    pub fn custom<F>(name: &str, bounds: Bounds, optimum_value: Option<f64>, evaluate: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            dim: bounds.dim(),
            bounds,
            kind: FunctionKind::Custom(Arc::new(evaluate)),
            shift: None,
            optimum_value,
            optimizer: None,
        }
    }

    /// Applies an external shift vector: the function is evaluated at
    /// `x - shift` and the known optimizer moves by `shift`.
    pub fn with_shift(mut self, shift: RealVector) -> Result<Self> {
        if shift.dim() != self.dim {
            return Err(Error::ShiftFile {
                path: String::new(),
                reason: format!(
                    "shift has {} values but the function has dimension {}",
                    shift.dim(),
                    self.dim
                ),
            });
        }
        self.optimizer = self.optimizer.take().map(|opt| {
            let moved: Vec<f64> = opt.iter().zip(shift.iter()).map(|(o, s)| o + s).collect();
            RealVector::new(moved).expect("shifted optimizer is finite")
        });
        self.shift = Some(shift);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn optimum_value(&self) -> Option<f64> {
        self.optimum_value
    }

    pub fn optimizer(&self) -> Option<&RealVector> {
        self.optimizer.as_ref()
    }

    pub fn shift(&self) -> Option<&RealVector> {
        self.shift.as_ref()
    }

    /// Evaluates the objective. Panics on dimension mismatch.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "position dimension mismatch");
        match &self.shift {
            Some(shift) => {
                let z: Vec<f64> = x.iter().zip(shift.iter()).map(|(v, s)| v - s).collect();
                self.kind.evaluate(&z)
            }
            None => self.kind.evaluate(x),
        }
    }

    /// Builds a suite function from its stable identifier.
    pub fn by_name(name: &str, dim: usize) -> Result<Self> {
        let f = match name {
            "sphere" => Self::base(FunctionKind::Sphere, "sphere", dim),
            "schwefel_1_2" => Self::base(FunctionKind::DoubleSum, "schwefel_1_2", dim),
            "rosenbrock" => Self::base(FunctionKind::Rosenbrock, "rosenbrock", dim),
            "rastrigin" => Self::base(FunctionKind::Rastrigin, "rastrigin", dim),
            "ackley" => Self::base(FunctionKind::Ackley, "ackley", dim),
            "griewank" => Self::base(FunctionKind::Griewank, "griewank", dim),
            "schwefel_2_26" => Self::base(FunctionKind::SchwefelSine, "schwefel_2_26", dim),
            "shifted_sphere" => {
                Self::shifted(FunctionKind::Sphere, "shifted_sphere", dim, 0x5348_4631)
            }
            "shifted_rastrigin" => Self::shifted(
                FunctionKind::Rastrigin,
                "shifted_rastrigin",
                dim,
                0x5348_4632,
            ),
            "shifted_ackley" => {
                Self::shifted(FunctionKind::Ackley, "shifted_ackley", dim, 0x5348_4633)
            }
            _ => {
                return Err(Error::UnknownFunction {
                    name: name.to_string(),
                    valid: FUNCTION_NAMES.join(", "),
                })
            }
        };
        Ok(f)
    }
}

/// Stable identifiers of the full suite, in listing order: unimodal,
/// multimodal, then shifted variants.
pub const FUNCTION_NAMES: [&str; 10] = [
    "sphere",
    "schwefel_1_2",
    "rosenbrock",
    "rastrigin",
    "ackley",
    "griewank",
    "schwefel_2_26",
    "shifted_sphere",
    "shifted_rastrigin",
    "shifted_ackley",
];

/// The whole suite at one dimension.
pub fn suite(dim: usize) -> Vec<ObjectiveFunction> {
    FUNCTION_NAMES
        .iter()
        .map(|name| ObjectiveFunction::by_name(name, dim).expect("registry names resolve"))
        .collect()
}

/// Reads the first `dim` whitespace-separated reals from a plain-text shift
/// file.
pub fn load_shift_file(path: &Path, dim: usize) -> Result<RealVector> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::ShiftFile {
        path: display.clone(),
        reason: e.to_string(),
    })?;
    let mut values = Vec::with_capacity(dim);
    for token in text.split_whitespace() {
        if values.len() == dim {
            break;
        }
        let v: f64 = token.parse().map_err(|_| Error::ShiftFile {
            path: display.clone(),
            reason: format!("cannot parse '{token}' as a real number"),
        })?;
        values.push(v);
    }
    if values.len() < dim {
        return Err(Error::ShiftFile {
            path: display,
            reason: format!("found {} values, need {dim}", values.len()),
        });
    }
    RealVector::new(values)
}
