use ndarray::ArrayView2;

use super::cms::{check_rows, ErmOutput, PenalizedObjective};
use super::loss::RegressionLoss;
use super::minimize::{minimize, Domain, MinimizeOptions};
use super::noise::spherical_laplace;
use super::regularizer::Regularizer;
use crate::mechanisms::gaussian_noise;
use crate::{DpError, RandomSource, Result};

/// Settings for private regression ERM.
///
/// `delta = 0` gives ε-DP with Gamma-magnitude noise; `delta > 0` gives
/// (ε, δ)-DP with Gaussian noise. Unlike the Gaussian mechanism, ε ≥ 1 is
/// allowed here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KstConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    pub domain: Domain,
    pub minimizer: MinimizeOptions,
}

impl KstConfig {
    pub fn new(epsilon: f64, delta: f64, gamma: f64, domain: Domain) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(DpError::InvalidBudget(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(DpError::InvalidBudget(format!(
                "delta must lie in [0, 1), got {delta}"
            )));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(DpError::input(format!(
                "regularization constant gamma must be positive, got {gamma}"
            )));
        }
        if let Domain::Ball { radius } = domain {
            if !(radius > 0.0) || !radius.is_finite() {
                return Err(DpError::input(format!("ball radius must be positive, got {radius}")));
            }
        }
        Ok(Self {
            epsilon,
            delta,
            gamma,
            domain,
            minimizer: MinimizeOptions::default(),
        })
    }
}

/// Standard deviation of each coordinate of the Gaussian linear term.
pub fn kst_gaussian_sigma(zeta: f64, epsilon: f64, delta: f64) -> f64 {
    zeta * (8.0 * (2.0 / delta).ln() + 4.0 * epsilon).sqrt() / epsilon
}

/// Private regularized regression by objective perturbation.
///
/// Rows of `x` must have ℓ2 norm at most √p. The result always lies in the
/// configured domain.
pub fn erm_kst(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    loss: &dyn RegressionLoss,
    reg: &dyn Regularizer,
    cfg: &KstConfig,
    rng: &mut RandomSource,
) -> Result<ErmOutput> {
    let p = x.ncols();
    check_rows(x, y.len(), (p as f64).sqrt())?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(DpError::input("responses must be finite"));
    }
    let zeta = loss.grad_norm_bound();
    let lambda = loss.eigen_bound();
    if !(zeta > 0.0) || !(lambda > 0.0) {
        return Err(DpError::input("loss must supply positive zeta and lambda"));
    }
    let eps = cfg.epsilon;
    let slack = 2.0 * lambda / eps;
    let b = if cfg.delta > 0.0 {
        let sigma = kst_gaussian_sigma(zeta, eps, cfg.delta);
        (0..p).map(|_| gaussian_noise(sigma, rng)).collect::<Vec<_>>()
    } else {
        spherical_laplace(p, 2.0 * zeta / eps, rng)
    };
    let obj = PenalizedObjective {
        x,
        y,
        weights: None,
        loss: |f: f64, t: f64| (loss.value(f, t), loss.derivative(f, t)),
        reg,
        gamma: cfg.gamma,
        slack,
        linear: Some(&b),
    };
    let m = minimize(&obj, &vec![0.0; p], cfg.domain, cfg.minimizer)?;
    Ok(ErmOutput {
        coefficients: m.x,
        converged: m.converged,
        iterations: m.iterations,
        slack,
    })
}
