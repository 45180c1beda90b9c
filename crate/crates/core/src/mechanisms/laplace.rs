use crate::mechanisms::{BudgetAllocation, DpVariant, Norm, PrivacyBudget, SensitivitySpec};
use crate::{DpError, RandomSource, Result};

/// Inverse CDF of Lap(0, scale) at `u` in (0, 1).
pub fn laplace_inverse_cdf(u: f64, scale: f64) -> f64 {
    let centered = u - 0.5;
    if centered == 0.0 || scale == 0.0 {
        return 0.0;
    }
    -scale * centered.signum() * (1.0 - 2.0 * centered.abs()).ln()
}

/// One Lap(0, scale) draw.
pub fn laplace_noise(scale: f64, rng: &mut RandomSource) -> f64 {
    laplace_inverse_cdf(rng.uniform(), scale)
}

/// Per-coordinate Laplace scales Δᵢ/εᵢ.
pub(crate) fn laplace_scales(
    epsilon: f64,
    sens: &[f64],
    alloc: Option<&BudgetAllocation>,
) -> Vec<f64> {
    match alloc {
        Some(alloc) => sens
            .iter()
            .zip(alloc.proportions())
            .map(|(d, p)| d / (epsilon * p))
            .collect(),
        None => {
            let total: f64 = sens.iter().sum();
            // εᵢ = ε·Δᵢ/ΣΔ, so every nonzero coordinate gets scale ΣΔ/ε.
            sens.iter()
                .map(|&d| if d == 0.0 { 0.0 } else { total / epsilon })
                .collect()
        }
    }
}

/// Releases `values` under ε-DP by adding independent Laplace noise.
///
/// Without an allocation the budget is split in proportion to the
/// per-coordinate sensitivities; with one, coordinate `i` receives `ε·allocᵢ`.
pub fn laplace_mechanism(
    values: &[f64],
    budget: &PrivacyBudget,
    sens: &SensitivitySpec,
    alloc: Option<&BudgetAllocation>,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    if budget.variant() != DpVariant::Pure {
        return Err(DpError::InvalidBudget(
            "the Laplace mechanism provides pure DP; use delta = 0".into(),
        ));
    }
    if sens.norm() != Norm::L1 {
        return Err(DpError::InvalidSensitivity(
            "the Laplace mechanism requires l1 sensitivity".into(),
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
    let scales = laplace_scales(budget.epsilon(), sens.per_coordinate(), alloc);
    Ok(values
        .iter()
        .zip(scales)
        .map(|(v, b)| v + laplace_noise(b, rng))
        .collect())
}
