use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{DpError, Result};

/// Flavor of differential privacy a budget is spent under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DpVariant {
    /// (ε, 0)-DP.
    Pure,
    /// (ε, δ)-DP with the additive δ slack.
    Approximate,
    /// (ε, δ) probabilistic DP: the privacy loss exceeds ε with probability
    /// at most δ.
    Probabilistic,
}

impl fmt::Display for DpVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DpVariant::Pure => "pure",
            DpVariant::Approximate => "approximate",
            DpVariant::Probabilistic => "probabilistic",
        };
        f.write_str(s)
    }
}

/// Privacy-loss parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    epsilon: f64,
    delta: f64,
    variant: DpVariant,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64, variant: DpVariant) -> Result<Self> {
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
        match variant {
            DpVariant::Pure if delta != 0.0 => Err(DpError::InvalidBudget(
                "pure DP requires delta = 0".into(),
            )),
            DpVariant::Approximate | DpVariant::Probabilistic if delta == 0.0 => Err(
                DpError::InvalidBudget(format!("{variant} DP requires delta > 0")),
            ),
            DpVariant::Approximate if epsilon >= 1.0 => Err(DpError::InvalidBudget(format!(
                "approximate DP through the Gaussian mechanism requires epsilon in (0, 1), got {epsilon}"
            ))),
            _ => Ok(Self {
                epsilon,
                delta,
                variant,
            }),
        }
    }

    pub fn pure(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0, DpVariant::Pure)
    }

    pub fn approximate(epsilon: f64, delta: f64) -> Result<Self> {
        Self::new(epsilon, delta, DpVariant::Approximate)
    }

    pub fn probabilistic(epsilon: f64, delta: f64) -> Result<Self> {
        Self::new(epsilon, delta, DpVariant::Probabilistic)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn variant(&self) -> DpVariant {
        self.variant
    }

    /// The share `fraction` of this budget, applied to both ε and δ.
    pub fn share(&self, fraction: f64) -> Result<Self> {
        Self::new(self.epsilon * fraction, self.delta * fraction, self.variant)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
}

/// How neighboring datasets are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborModel {
    /// Same size, one record modified.
    Bounded,
    /// One record added or removed.
    Unbounded,
}

impl fmt::Display for NeighborModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NeighborModel::Bounded => "bounded",
            NeighborModel::Unbounded => "unbounded",
        })
    }
}

/// Per-coordinate global sensitivity of a vector-valued statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivitySpec {
    norm: Norm,
    per_coordinate: Vec<f64>,
    neighbor: NeighborModel,
}

impl SensitivitySpec {
    pub fn new(norm: Norm, per_coordinate: Vec<f64>, neighbor: NeighborModel) -> Result<Self> {
        if per_coordinate.is_empty() {
            return Err(DpError::InvalidSensitivity("sensitivity vector is empty".into()));
        }
        if let Some(bad) = per_coordinate.iter().find(|d| !(**d >= 0.0) || !d.is_finite()) {
            return Err(DpError::InvalidSensitivity(format!(
                "sensitivities must be finite and nonnegative, got {bad}"
            )));
        }
        Ok(Self {
            norm,
            per_coordinate,
            neighbor,
        })
    }

    pub fn l1(per_coordinate: Vec<f64>) -> Result<Self> {
        Self::new(Norm::L1, per_coordinate, NeighborModel::Bounded)
    }

    pub fn l2(per_coordinate: Vec<f64>) -> Result<Self> {
        Self::new(Norm::L2, per_coordinate, NeighborModel::Bounded)
    }

    pub fn with_neighbor(mut self, neighbor: NeighborModel) -> Self {
        self.neighbor = neighbor;
        self
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn per_coordinate(&self) -> &[f64] {
        &self.per_coordinate
    }

    pub fn neighbor(&self) -> NeighborModel {
        self.neighbor
    }

    pub fn len(&self) -> usize {
        self.per_coordinate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_coordinate.is_empty()
    }

    /// ℓ1 composite: the sum of the coordinate sensitivities.
    pub fn l1_total(&self) -> f64 {
        self.per_coordinate.iter().sum()
    }

    /// ℓ2 composite: the root sum of squares.
    pub fn l2_total(&self) -> f64 {
        self.per_coordinate.iter().map(|d| d * d).sum::<f64>().sqrt()
    }
}

/// Proportions splitting a budget across output coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetAllocation(Vec<f64>);

impl BudgetAllocation {
    pub fn new(proportions: Vec<f64>) -> Result<Self> {
        if proportions.is_empty() {
            return Err(DpError::input("allocation is empty"));
        }
        if proportions.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(DpError::input("allocation proportions must be positive"));
        }
        let total: f64 = proportions.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(DpError::input(format!(
                "allocation proportions must sum to 1, got {total}"
            )));
        }
        Ok(Self(proportions))
    }

    /// Proportions matching the default Laplace split, ε·Δᵢ/ΣΔ.
    pub fn proportional_to(sensitivities: &[f64]) -> Result<Self> {
        let total: f64 = sensitivities.iter().sum();
        if !(total > 0.0) {
            return Err(DpError::InvalidSensitivity(
                "cannot allocate proportionally to all-zero sensitivities".into(),
            ));
        }
        Self::new_unchecked_sum(sensitivities.iter().map(|d| d / total).collect())
    }

    fn new_unchecked_sum(proportions: Vec<f64>) -> Result<Self> {
        if proportions.iter().any(|p| !(*p > 0.0)) {
            return Err(DpError::input("allocation proportions must be positive"));
        }
        Ok(Self(proportions))
    }

    pub fn proportions(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
