use std::path::Path;

use serde::{Deserialize, Serialize};

use super::rff::RffProjection;
use super::scaler::FeatureScaler;
use crate::erm::Perturbation;
use crate::{DpError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Logistic,
    SvmLinear,
    SvmGaussian,
    Linear,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Logistic => "logistic",
            ModelKind::SvmLinear => "svm_linear",
            ModelKind::SvmGaussian => "svm_gaussian",
            ModelKind::Linear => "linear",
        })
    }
}

/// Privacy and regularization settings the model was trained with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    /// Perturbation method for classifiers; absent for regression.
    pub method: Option<Perturbation>,
}

/// Affine map applied to regression responses before training:
/// y_scaled = (y − shift) / scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseScaling {
    pub shift: f64,
    pub scale: f64,
}

/// A released model. Coefficients are on the original feature scale (or on
/// the random-feature scale for Gaussian-kernel SVMs), with the intercept
/// first when `add_bias` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: ModelKind,
    pub coefficients: Vec<f64>,
    pub add_bias: bool,
    pub scaler: FeatureScaler,
    #[serde(default)]
    pub huber_h: Option<f64>,
    #[serde(default)]
    pub rff: Option<RffProjection>,
    #[serde(default)]
    pub response: Option<ResponseScaling>,
    pub config: ConfigSnapshot,
    #[serde(default)]
    pub feature_names: Vec<String>,
    /// Whether the private minimizer met its tolerance.
    pub converged: bool,
    /// Non-fatal notes from fitting; not serialized.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl TrainedModel {
    /// Number of raw feature columns a prediction input must have.
    pub fn input_dim(&self) -> usize {
        match &self.rff {
            Some(r) => r.input_dim,
            None => self.scaler.dim() - self.add_bias as usize,
        }
    }

    /// Coefficients in the space the private optimizer worked in.
    pub fn scaled_coefficients(&self) -> Vec<f64> {
        let mut theta = self.coefficients.clone();
        if let Some(r) = self.response {
            if self.add_bias {
                theta[0] -= r.shift;
            }
            theta.iter_mut().for_each(|t| *t /= r.scale);
        }
        self.scaler.scale_coefficients(&theta)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| DpError::input(format!("cannot serialize model: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)
            .map_err(|e| DpError::input(format!("cannot parse model: {e}")))?;
        let expected = match &model.rff {
            Some(r) => r.dim + model.add_bias as usize,
            None => model.scaler.dim(),
        };
        if model.coefficients.len() != expected {
            return Err(DpError::dims(format!(
                "model has {} coefficients, expected {expected}",
                model.coefficients.len()
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")
            .map_err(|e| DpError::input(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DpError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
