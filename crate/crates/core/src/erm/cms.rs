use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use super::loss::MarginLoss;
use super::minimize::{minimize, Domain, MinimizeOptions, Objective};
use super::noise::spherical_laplace;
use super::regularizer::Regularizer;
use crate::mechanisms::{DpVariant, PrivacyBudget};
use crate::{DpError, RandomSource, Result};

pub(crate) const ROW_NORM_TOLERANCE: f64 = 1e-9;

/// How noise enters a classification fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Perturbation {
    /// Noise added to the exact regularized minimizer.
    Output,
    /// Random linear term (and slack) added to the objective before solving.
    Objective,
}

impl std::fmt::Display for Perturbation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Perturbation::Output => "output",
            Perturbation::Objective => "objective",
        })
    }
}

impl std::str::FromStr for Perturbation {
    type Err = DpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "output" => Ok(Perturbation::Output),
            "objective" => Ok(Perturbation::Objective),
            other => Err(DpError::input(format!(
                "unknown perturbation method '{other}' (expected output or objective)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErmConfig {
    pub budget: PrivacyBudget,
    pub gamma: f64,
    pub perturbation: Perturbation,
    /// Upper bound on observation weights; only consulted for weighted fits.
    pub weight_upper_bound: f64,
    pub minimizer: MinimizeOptions,
}

impl ErmConfig {
    pub fn new(budget: PrivacyBudget, gamma: f64, perturbation: Perturbation) -> Result<Self> {
        let cfg = Self {
            budget,
            gamma,
            perturbation,
            weight_upper_bound: 1.0,
            minimizer: MinimizeOptions::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_weight_upper_bound(mut self, bound: f64) -> Result<Self> {
        self.weight_upper_bound = bound;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(DpError::input(format!(
                "regularization constant gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.weight_upper_bound > 0.0) || !self.weight_upper_bound.is_finite() {
            return Err(DpError::input(format!(
                "weight upper bound must be positive, got {}",
                self.weight_upper_bound
            )));
        }
        if self.budget.variant() != DpVariant::Pure {
            return Err(DpError::InvalidBudget(
                "classification ERM provides pure DP; pass a budget with delta = 0".into(),
            ));
        }
        Ok(())
    }
}

/// Result of a private fit in the space the data was given in.
#[derive(Debug, Clone, PartialEq)]
pub struct ErmOutput {
    pub coefficients: Vec<f64>,
    /// Whether the inner minimizer met its tolerance.
    pub converged: bool,
    pub iterations: usize,
    /// Slack Δ added to the objective (0 for output perturbation).
    pub slack: f64,
}

/// Splits ε for objective perturbation given curvature bound `c`.
///
/// Returns (ε′, Δ): the budget that calibrates the linear noise term and the
/// slack multiplying ‖θ‖²/(2n).
pub fn objective_slack(epsilon: f64, gamma: f64, curvature: f64) -> (f64, f64) {
    let eps_prime = epsilon - 2.0 * (1.0 + curvature / gamma).ln();
    if eps_prime > 0.0 {
        (eps_prime, 0.0)
    } else {
        let slack = curvature / ((epsilon / 4.0).exp_m1()) - gamma;
        (epsilon / 2.0, slack)
    }
}

pub(crate) struct PenalizedObjective<'a, F>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    pub x: ArrayView2<'a, f64>,
    pub y: &'a [f64],
    pub weights: Option<&'a [f64]>,
    /// (fitted value, target) -> (loss, d loss / d fitted value)
    pub loss: F,
    pub reg: &'a dyn Regularizer,
    pub gamma: f64,
    pub slack: f64,
    pub linear: Option<&'a [f64]>,
}

impl<F> Objective for PenalizedObjective<'_, F>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    fn dim(&self) -> usize {
        self.x.ncols()
    }

    fn value_grad(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        let n = self.x.nrows() as f64;
        self.reg.gradient(theta, grad);
        let mut value = self.gamma * self.reg.value(theta);
        for (j, g) in grad.iter_mut().enumerate() {
            *g = self.gamma * *g + self.slack * theta[j];
            if let Some(b) = self.linear {
                *g += b[j];
            }
        }
        value += 0.5 * self.slack * theta.iter().map(|t| t * t).sum::<f64>();
        if let Some(b) = self.linear {
            value += b.iter().zip(theta).map(|(a, t)| a * t).sum::<f64>();
        }
        for (i, row) in self.x.outer_iter().enumerate() {
            let f: f64 = row.iter().zip(theta).map(|(a, t)| a * t).sum();
            let (l, dl) = (self.loss)(f, self.y[i]);
            let w = self.weights.map_or(1.0, |w| w[i]);
            value += w * l;
            let coef = w * dl;
            if coef != 0.0 {
                for (g, a) in grad.iter_mut().zip(row.iter()) {
                    *g += coef * a;
                }
            }
        }
        for g in grad.iter_mut() {
            *g /= n;
        }
        value / n
    }
}

pub(crate) fn check_rows(x: ArrayView2<'_, f64>, y_len: usize, max_norm: f64) -> Result<()> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Err(DpError::input("design matrix is empty"));
    }
    if x.nrows() != y_len {
        return Err(DpError::dims(format!(
            "{} rows but {} responses",
            x.nrows(),
            y_len
        )));
    }
    for (i, row) in x.outer_iter().enumerate() {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(DpError::input(format!("row {i} has a non-finite value")));
        }
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > max_norm + ROW_NORM_TOLERANCE {
            return Err(DpError::ContractViolation(format!(
                "row {i} has norm {norm}, above the bound {max_norm}"
            )));
        }
    }
    Ok(())
}

/// Private regularized classification.
///
/// `x` rows must have ℓ2 norm at most 1 and `y` entries must be ±1. With
/// `weights = None` every observation has weight 1 and the weight bound is 1,
/// whatever `cfg.weight_upper_bound` says. Weighted fits require output
/// perturbation.
pub fn erm_cms(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    loss: &dyn MarginLoss,
    reg: &dyn Regularizer,
    cfg: &ErmConfig,
    weights: Option<&[f64]>,
    rng: &mut RandomSource,
) -> Result<ErmOutput> {
    cfg.validate()?;
    check_rows(x, y.len(), 1.0)?;
    if let Some(i) = y.iter().position(|&v| v != 1.0 && v != -1.0) {
        return Err(DpError::ContractViolation(format!(
            "label {} at row {i} is not -1 or +1",
            y[i]
        )));
    }
    let mut w_ub = 1.0;
    if let Some(w) = weights {
        if w.len() != y.len() {
            return Err(DpError::dims(format!(
                "{} weights for {} observations",
                w.len(),
                y.len()
            )));
        }
        w_ub = cfg.weight_upper_bound;
        if let Some(i) = w.iter().position(|&v| !(0.0..=w_ub).contains(&v)) {
            return Err(DpError::ContractViolation(format!(
                "weight {} at row {i} lies outside [0, {w_ub}]",
                w[i]
            )));
        }
        if cfg.perturbation == Perturbation::Objective {
            return Err(DpError::input(
                "weighted fits support output perturbation only",
            ));
        }
    }
    if !reg.strongly_convex() {
        return Err(DpError::input("regularizer must be 1-strongly convex"));
    }

    let p = x.ncols();
    let eps = cfg.budget.epsilon();
    let gamma = cfg.gamma;
    let margin = |f: f64, label: f64| {
        let z = label * f;
        (loss.value(z), label * loss.derivative(z))
    };

    match cfg.perturbation {
        Perturbation::Output => {
            let obj = PenalizedObjective {
                x,
                y,
                weights,
                loss: margin,
                reg,
                gamma,
                slack: 0.0,
                linear: None,
            };
            let m = minimize(&obj, &vec![0.0; p], Domain::Unconstrained, cfg.minimizer)?;
            let beta = gamma * eps / (2.0 * w_ub);
            let b = spherical_laplace(p, 1.0 / beta, rng);
            let coefficients = m.x.iter().zip(&b).map(|(t, n)| t + n).collect();
            Ok(ErmOutput {
                coefficients,
                converged: m.converged,
                iterations: m.iterations,
                slack: 0.0,
            })
        }
        Perturbation::Objective => {
            let c = loss.curvature_bound().ok_or_else(|| {
                DpError::input("objective perturbation needs a loss with a curvature bound")
            })?;
            if !reg.twice_differentiable() {
                return Err(DpError::input(
                    "objective perturbation needs a twice-differentiable regularizer",
                ));
            }
            let (eps_prime, slack) = objective_slack(eps, gamma, c);
            let b = spherical_laplace(p, 2.0 / eps_prime, rng);
            let obj = PenalizedObjective {
                x,
                y,
                weights: None,
                loss: margin,
                reg,
                gamma,
                slack,
                linear: Some(&b),
            };
            let m = minimize(&obj, &vec![0.0; p], Domain::Unconstrained, cfg.minimizer)?;
            Ok(ErmOutput {
                coefficients: m.x,
                converged: m.converged,
                iterations: m.iterations,
                slack,
            })
        }
    }
}
