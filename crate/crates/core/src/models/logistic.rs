use ndarray::ArrayView2;

use super::scaler::FeatureScaler;
use super::trained::{ConfigSnapshot, ModelKind, TrainedModel};
use super::{check_within_bounds, linear_scores, signed_labels, with_bias};
use crate::erm::{erm_cms, ErmConfig, L2Regularizer, LogisticLoss};
use crate::stats::Bounds;
use crate::{DpError, RandomSource, Result};

/// Private logistic regression with an ℓ2 regularizer.
///
/// `y` holds {0, 1} labels. Every feature must lie inside its bounds; values
/// outside are rejected rather than clipped.
pub fn fit_logistic(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    bounds: &[Bounds],
    cfg: &ErmConfig,
    add_bias: bool,
    rng: &mut RandomSource,
) -> Result<TrainedModel> {
    check_within_bounds(x, bounds)?;
    let labels = signed_labels(y)?;
    let scaler = FeatureScaler::classification(bounds, add_bias);
    let mut design = with_bias(x, add_bias);
    scaler.scale_design(&mut design)?;
    let out = erm_cms(design.view(), &labels, &LogisticLoss, &L2Regularizer, cfg, None, rng)?;
    let mut warnings = Vec::new();
    if !out.converged {
        warnings.push(format!(
            "minimizer stopped after {} iterations without meeting its tolerance",
            out.iterations
        ));
    }
    Ok(TrainedModel {
        kind: ModelKind::Logistic,
        coefficients: scaler.unscale_coefficients(&out.coefficients),
        add_bias,
        scaler,
        huber_h: None,
        rff: None,
        response: None,
        config: ConfigSnapshot {
            epsilon: cfg.budget.epsilon(),
            delta: 0.0,
            gamma: cfg.gamma,
            method: Some(cfg.perturbation),
        },
        feature_names: Vec::new(),
        converged: out.converged,
        warnings,
    })
}

/// Probabilities σ(xθ) when `raw_value` is set, otherwise labels with 0.5
/// rounding up to 1.
pub fn predict_logistic(
    model: &TrainedModel,
    x: ArrayView2<'_, f64>,
    raw_value: bool,
) -> Result<Vec<f64>> {
    if model.kind != ModelKind::Logistic {
        return Err(DpError::input(format!(
            "expected a logistic model, got {}",
            model.kind
        )));
    }
    let scores = linear_scores(model, x)?;
    Ok(scores
        .into_iter()
        .map(|s| {
            let p = crate::erm::sigmoid(s);
            if raw_value {
                p
            } else if p >= 0.5 {
                1.0
            } else {
                0.0
            }
        })
        .collect())
}
