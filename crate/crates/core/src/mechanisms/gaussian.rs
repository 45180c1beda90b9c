use crate::mechanisms::{BudgetAllocation, DpVariant, Norm, PrivacyBudget, SensitivitySpec};
use crate::special::standard_normal_quantile;
use crate::{DpError, RandomSource, Result};

/// Noise standard deviation for the Gaussian mechanism at ℓ2 sensitivity
/// `delta2f`.
///
/// Approximate DP uses σ = Δ·√(2 ln(1.25/δ))/ε and needs ε < 1. Probabilistic
/// DP uses σ = Δ·(√(z² + 2ε) − z)/(2ε) with z = Φ⁻¹(δ/2).
pub fn gaussian_sigma(budget: &PrivacyBudget, delta2f: f64) -> Result<f64> {
    if !(delta2f >= 0.0) || !delta2f.is_finite() {
        return Err(DpError::InvalidSensitivity(format!(
            "l2 sensitivity must be finite and nonnegative, got {delta2f}"
        )));
    }
    let eps = budget.epsilon();
    let delta = budget.delta();
    match budget.variant() {
        DpVariant::Pure => Err(DpError::InvalidBudget(
            "the Gaussian mechanism needs delta > 0".into(),
        )),
        DpVariant::Approximate => {
            if eps >= 1.0 {
                return Err(DpError::InvalidBudget(format!(
                    "approximate DP requires epsilon < 1, got {eps}"
                )));
            }
            Ok(delta2f * (2.0 * (1.25 / delta).ln()).sqrt() / eps)
        }
        DpVariant::Probabilistic => {
            let z = standard_normal_quantile(delta / 2.0);
            Ok(delta2f * ((z * z + 2.0 * eps).sqrt() - z) / (2.0 * eps))
        }
    }
}

/// One N(0, σ²) draw.
pub fn gaussian_noise(sigma: f64, rng: &mut RandomSource) -> f64 {
    let z = rng.standard_normal();
    if sigma == 0.0 {
        0.0
    } else {
        sigma * z
    }
}

pub(crate) fn gaussian_sigmas(
    budget: &PrivacyBudget,
    sens: &[f64],
    alloc: Option<&BudgetAllocation>,
) -> Result<Vec<f64>> {
    match alloc {
        None => {
            let composite = sens.iter().map(|d| d * d).sum::<f64>().sqrt();
            let sigma = gaussian_sigma(budget, composite)?;
            Ok(vec![sigma; sens.len()])
        }
        Some(alloc) => sens
            .iter()
            .zip(alloc.proportions())
            .map(|(&d, &p)| gaussian_sigma(&budget.share(p)?, d))
            .collect(),
    }
}

/// Releases `values` under approximate or probabilistic (ε, δ)-DP by adding
/// independent Gaussian noise.
///
/// By default one σ is calibrated to the composite sensitivity √(ΣΔᵢ²) and
/// the full budget. An allocation instead gives coordinate `i` the budget
/// (ε·allocᵢ, δ·allocᵢ) at its own sensitivity.
pub fn gaussian_mechanism(
    values: &[f64],
    budget: &PrivacyBudget,
    sens: &SensitivitySpec,
    alloc: Option<&BudgetAllocation>,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    if sens.norm() != Norm::L2 {
        return Err(DpError::InvalidSensitivity(
            "the Gaussian mechanism requires l2 sensitivity".into(),
        ));
    }
    if values.len() != sens.len() {
        return Err(DpError::dims(format!(
            "{} values but {} sensitivities",
            values.len(),
            sens.len()
        )));
    }
    if let Some(a) = alloc {
        if a.len() != values.len() {
            return Err(DpError::dims(format!(
                "{} values but {} allocation proportions",
                values.len(),
                a.len()
            )));
        }
    }
    let sigmas = gaussian_sigmas(budget, sens.per_coordinate(), alloc)?;
    Ok(values
        .iter()
        .zip(sigmas)
        .map(|(v, s)| v + gaussian_noise(s, rng))
        .collect())
}
