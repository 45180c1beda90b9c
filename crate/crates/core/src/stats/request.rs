use serde::{Deserialize, Serialize};

use crate::mechanisms::{
    gaussian_noise, gaussian_sigma, laplace_noise, DpVariant, NeighborModel, PrivacyBudget,
};
use crate::{DpError, RandomSource, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechanismKind {
    Laplace,
    Gaussian,
}

/// Which neighbor model(s) to release under. `Both` yields two releases,
/// each spending the full budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborChoice {
    Bounded,
    Unbounded,
    Both,
}

impl NeighborChoice {
    pub fn models(&self) -> Vec<NeighborModel> {
        match self {
            NeighborChoice::Bounded => vec![NeighborModel::Bounded],
            NeighborChoice::Unbounded => vec![NeighborModel::Unbounded],
            NeighborChoice::Both => vec![NeighborModel::Bounded, NeighborModel::Unbounded],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatRequest {
    pub budget: PrivacyBudget,
    pub mechanism: MechanismKind,
    pub neighbor: NeighborChoice,
}

impl StatRequest {
    pub fn new(
        budget: PrivacyBudget,
        mechanism: MechanismKind,
        neighbor: NeighborChoice,
    ) -> Result<Self> {
        match (mechanism, budget.variant()) {
            (MechanismKind::Laplace, DpVariant::Pure) => {}
            (MechanismKind::Laplace, _) => {
                return Err(DpError::InvalidBudget(
                    "the Laplace mechanism requires a pure budget (delta = 0)".into(),
                ))
            }
            (MechanismKind::Gaussian, DpVariant::Pure) => {
                return Err(DpError::InvalidBudget(
                    "the Gaussian mechanism requires delta > 0".into(),
                ))
            }
            (MechanismKind::Gaussian, _) => {}
        }
        Ok(Self {
            budget,
            mechanism,
            neighbor,
        })
    }

    /// Laplace mechanism, bounded neighbors.
    pub fn laplace(epsilon: f64) -> Result<Self> {
        Self::new(
            PrivacyBudget::pure(epsilon)?,
            MechanismKind::Laplace,
            NeighborChoice::Bounded,
        )
    }

    /// Gaussian mechanism, bounded neighbors.
    pub fn gaussian(budget: PrivacyBudget) -> Result<Self> {
        Self::new(budget, MechanismKind::Gaussian, NeighborChoice::Bounded)
    }

    pub fn with_neighbor(mut self, neighbor: NeighborChoice) -> Self {
        self.neighbor = neighbor;
        self
    }
}

/// Metadata accompanying every release, suitable for a budget ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReleaseMeta {
    pub statistic: String,
    /// Global sensitivity used for calibration: ℓ1 for Laplace, ℓ2 for
    /// Gaussian.
    pub sensitivity: f64,
    pub neighbor: NeighborModel,
    pub mechanism: MechanismKind,
    pub epsilon: f64,
    pub delta: f64,
    pub variant: DpVariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Release<T> {
    pub value: T,
    pub meta: ReleaseMeta,
}

impl ReleaseMeta {
    pub(crate) fn new(
        statistic: &str,
        sensitivity: f64,
        neighbor: NeighborModel,
        req: &StatRequest,
    ) -> Self {
        Self {
            statistic: statistic.to_string(),
            sensitivity,
            neighbor,
            mechanism: req.mechanism,
            epsilon: req.budget.epsilon(),
            delta: req.budget.delta(),
            variant: req.budget.variant(),
        }
    }
}

/// Adds noise calibrated to a joint sensitivity to each coordinate: Laplace
/// at scale Δ₁/ε or Gaussian at σ(ε, δ, Δ₂).
pub(crate) fn perturb(
    values: &[f64],
    sensitivity: f64,
    req: &StatRequest,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    match req.mechanism {
        MechanismKind::Laplace => {
            let scale = sensitivity / req.budget.epsilon();
            Ok(values.iter().map(|v| v + laplace_noise(scale, rng)).collect())
        }
        MechanismKind::Gaussian => {
            let sigma = gaussian_sigma(&req.budget, sensitivity)?;
            Ok(values.iter().map(|v| v + gaussian_noise(sigma, rng)).collect())
        }
    }
}

/// Releases a scalar under each requested neighbor model.
pub(crate) fn release_scalar(
    statistic: &str,
    value: f64,
    req: &StatRequest,
    sensitivity_for: impl Fn(NeighborModel) -> f64,
    rng: &mut RandomSource,
) -> Result<Vec<Release<f64>>> {
    req.neighbor
        .models()
        .into_iter()
        .map(|nb| {
            let sens = sensitivity_for(nb);
            let noisy = perturb(&[value], sens, req, rng)?[0];
            Ok(Release {
                value: noisy,
                meta: ReleaseMeta::new(statistic, sens, nb, req),
            })
        })
        .collect()
}
