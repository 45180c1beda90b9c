use ndarray::ArrayView2;

use super::scaler::FeatureScaler;
use super::trained::{ConfigSnapshot, ModelKind, ResponseScaling, TrainedModel};
use super::{check_within_bounds, linear_scores, BOUND_TOLERANCE};
use crate::erm::{erm_kst, Domain, KstConfig, L2Regularizer, SquaredLoss};
use crate::stats::Bounds;
use crate::{DpError, RandomSource, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinregOptions {
    pub epsilon: f64,
    /// 0 for ε-DP; positive for (ε, δ)-DP.
    pub delta: f64,
    pub gamma: f64,
    pub add_bias: bool,
}

/// Private linear regression with squared loss over the ball ‖θ‖₂ ≤ √p.
///
/// `bounds` holds one entry per feature column followed by the response
/// bounds. Features are divided by their largest allowed magnitude; the
/// response is centered at its bound midpoint when `add_bias` is set and
/// rescaled so it never exceeds p in magnitude.
pub fn fit_linreg(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    bounds: &[Bounds],
    opts: &LinregOptions,
    rng: &mut RandomSource,
) -> Result<TrainedModel> {
    if bounds.len() != x.ncols() + 1 {
        return Err(DpError::dims(format!(
            "expected {} bounds (features then response), got {}",
            x.ncols() + 1,
            bounds.len()
        )));
    }
    let (feature_bounds, y_bounds) = bounds.split_at(x.ncols());
    let y_bounds = y_bounds[0];
    check_within_bounds(x, feature_bounds)?;
    if y.len() != x.nrows() {
        return Err(DpError::dims(format!("{} rows but {} responses", x.nrows(), y.len())));
    }
    if let Some((i, v)) = y.iter().enumerate().find(|(_, v)| !y_bounds.contains(**v, BOUND_TOLERANCE)) {
        return Err(DpError::ContractViolation(format!(
            "response {v} at row {i} lies outside [{}, {}]",
            y_bounds.lower(),
            y_bounds.upper()
        )));
    }

    let scaler = FeatureScaler::regression(feature_bounds, opts.add_bias);
    let p = scaler.dim();
    let shift = if opts.add_bias {
        0.5 * (y_bounds.lower() + y_bounds.upper())
    } else {
        0.0
    };
    let y_reach = (y_bounds.lower() - shift).abs().max((y_bounds.upper() - shift).abs());
    let y_scale = y_reach / p as f64;
    let ys: Vec<f64> = y.iter().map(|v| ((v - shift) / y_scale).clamp(-(p as f64), p as f64)).collect();

    let mut design = super::with_bias(x, opts.add_bias);
    scaler.scale_design(&mut design)?;
    let radius = (p as f64).sqrt();
    let cfg = KstConfig::new(opts.epsilon, opts.delta, opts.gamma, Domain::Ball { radius })?;
    let out = erm_kst(
        design.view(),
        &ys,
        &SquaredLoss::for_dimension(p),
        &L2Regularizer,
        &cfg,
        rng,
    )?;

    let mut coefficients = scaler.unscale_coefficients(&out.coefficients);
    coefficients.iter_mut().for_each(|c| *c *= y_scale);
    if opts.add_bias {
        coefficients[0] += shift;
    }
    let mut warnings = Vec::new();
    if !out.converged {
        warnings.push(format!(
            "minimizer stopped after {} iterations without meeting its tolerance",
            out.iterations
        ));
    }
    Ok(TrainedModel {
        kind: ModelKind::Linear,
        coefficients,
        add_bias: opts.add_bias,
        scaler,
        huber_h: None,
        rff: None,
        response: Some(ResponseScaling {
            shift,
            scale: y_scale,
        }),
        config: ConfigSnapshot {
            epsilon: opts.epsilon,
            delta: opts.delta,
            gamma: opts.gamma,
            method: None,
        },
        feature_names: Vec::new(),
        converged: out.converged,
        warnings,
    })
}

pub fn predict_linreg(model: &TrainedModel, x: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
    if model.kind != ModelKind::Linear {
        return Err(DpError::input(format!("expected a linear model, got {}", model.kind)));
    }
    linear_scores(model, x)
}
