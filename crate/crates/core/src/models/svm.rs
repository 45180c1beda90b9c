use ndarray::ArrayView2;

use super::rff::RffProjection;
use super::scaler::FeatureScaler;
use super::trained::{ConfigSnapshot, ModelKind, TrainedModel};
use super::{check_within_bounds, linear_scores, signed_labels, with_bias};
use crate::erm::{erm_cms, ErmConfig, HuberLoss, L2Regularizer, MarginLoss};
use crate::stats::Bounds;
use crate::{DpError, RandomSource, Result};

/// Huber loss of margin `z` with width `h`, and its derivative.
pub fn huber_loss(z: f64, h: f64) -> Result<(f64, f64)> {
    let l = HuberLoss::new(h)
        .ok_or_else(|| DpError::input(format!("Huber width must be positive, got {h}")))?;
    Ok((l.value(z), l.derivative(z)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Linear,
    /// Gaussian kernel through random Fourier features.
    Gaussian,
}

impl std::str::FromStr for Kernel {
    type Err = DpError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Kernel::Linear),
            "gaussian" => Ok(Kernel::Gaussian),
            other => Err(DpError::input(format!(
                "unknown kernel '{other}' (expected linear or gaussian)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmOptions {
    pub kernel: Kernel,
    /// Required for the linear kernel, ignored for the Gaussian kernel.
    pub bounds: Option<Vec<Bounds>>,
    /// Number of random features for the Gaussian kernel.
    pub features: usize,
    /// Gaussian kernel β; defaults to 1/p.
    pub kernel_param: Option<f64>,
    pub huber_h: f64,
    pub weights: Option<Vec<f64>>,
    pub weight_upper_bound: Option<f64>,
    pub add_bias: bool,
}

impl SvmOptions {
    pub fn linear(bounds: Vec<Bounds>) -> Self {
        Self {
            kernel: Kernel::Linear,
            bounds: Some(bounds),
            features: 0,
            kernel_param: None,
            huber_h: HuberLoss::DEFAULT_H,
            weights: None,
            weight_upper_bound: None,
            add_bias: false,
        }
    }

    pub fn gaussian(features: usize) -> Self {
        Self {
            kernel: Kernel::Gaussian,
            bounds: None,
            features,
            ..Self::linear(Vec::new())
        }
    }
}

/// Private SVM with the Huber-smoothed hinge loss and an ℓ2 regularizer.
///
/// With observation weights this is the weighted SVM used for outcome-weighted
/// learning; weighted fits need `weight_upper_bound` and output perturbation.
pub fn fit_svm(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    opts: &SvmOptions,
    cfg: &ErmConfig,
    rng: &mut RandomSource,
) -> Result<TrainedModel> {
    let labels = signed_labels(y)?;
    let loss = HuberLoss::new(opts.huber_h).ok_or_else(|| {
        DpError::input(format!("Huber width must be positive, got {}", opts.huber_h))
    })?;
    let mut cfg = *cfg;
    if opts.weights.is_some() {
        let bound = opts
            .weight_upper_bound
            .ok_or_else(|| DpError::input("observation weights need an upper bound"))?;
        cfg = cfg.with_weight_upper_bound(bound)?;
    }
    let mut warnings = Vec::new();

    let (kind, rff, design_raw, scaler) = match opts.kernel {
        Kernel::Linear => {
            let bounds = opts
                .bounds
                .as_deref()
                .ok_or_else(|| DpError::input("the linear kernel needs feature bounds"))?;
            check_within_bounds(x, bounds)?;
            let scaler = FeatureScaler::classification(bounds, opts.add_bias);
            (ModelKind::SvmLinear, None, with_bias(x, opts.add_bias), scaler)
        }
        Kernel::Gaussian => {
            if opts.bounds.is_some() {
                warnings.push("bounds are not used by the Gaussian kernel and were ignored".into());
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(DpError::input("features must be finite"));
            }
            let p = x.ncols();
            let beta = opts.kernel_param.unwrap_or(1.0 / p as f64);
            let seed = rng.next_u64();
            let proj = RffProjection::new(p, opts.features, beta, seed)?;
            let v = proj.transform_matrix(x)?;
            let half = (opts.features as f64).sqrt().recip();
            let feature_bounds = vec![Bounds::new(-half, half)?; opts.features];
            let scaler = FeatureScaler::classification(&feature_bounds, opts.add_bias);
            (ModelKind::SvmGaussian, Some(proj), with_bias(v.view(), opts.add_bias), scaler)
        }
    };

    let mut design = design_raw;
    scaler.scale_design(&mut design)?;
    let out = erm_cms(
        design.view(),
        &labels,
        &loss,
        &L2Regularizer,
        &cfg,
        opts.weights.as_deref(),
        rng,
    )?;
    if !out.converged {
        warnings.push(format!(
            "minimizer stopped after {} iterations without meeting its tolerance",
            out.iterations
        ));
    }
    Ok(TrainedModel {
        kind,
        coefficients: scaler.unscale_coefficients(&out.coefficients),
        add_bias: opts.add_bias,
        scaler,
        huber_h: Some(opts.huber_h),
        rff,
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

/// Margins xθ when `raw_value` is set, otherwise labels (margin ≥ 0 → 1).
pub fn predict_svm(model: &TrainedModel, x: ArrayView2<'_, f64>, raw_value: bool) -> Result<Vec<f64>> {
    if !matches!(model.kind, ModelKind::SvmLinear | ModelKind::SvmGaussian) {
        return Err(DpError::input(format!("expected an SVM model, got {}", model.kind)));
    }
    let scores = linear_scores(model, x)?;
    Ok(if raw_value {
        scores
    } else {
        scores.into_iter().map(|m| if m >= 0.0 { 1.0 } else { 0.0 }).collect()
    })
}
