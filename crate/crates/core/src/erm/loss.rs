use serde::{Deserialize, Serialize};

/// Loss of a binary classifier as a function of the margin z = y·xθ with
/// y ∈ {−1, +1}.
///
/// Private training assumes |φ′(z)| ≤ 1; objective perturbation also needs
/// |φ″(z)| ≤ c for the [`curvature_bound`](MarginLoss::curvature_bound) c.
pub trait MarginLoss: Send + Sync {
    fn value(&self, z: f64) -> f64;
    fn derivative(&self, z: f64) -> f64;
    fn second_derivative(&self, z: f64) -> f64;
    /// Bound c on |φ″|, if the loss is twice differentiable.
    fn curvature_bound(&self) -> Option<f64>;
}

/// Cross-entropy loss log(1 + e^(−z)); c = 1/4.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LogisticLoss;

impl MarginLoss for LogisticLoss {
    fn value(&self, z: f64) -> f64 {
        // log(1 + e^(-z)) without overflow
        if z > 0.0 {
            (-z).exp().ln_1p()
        } else {
            -z + z.exp().ln_1p()
        }
    }

    fn derivative(&self, z: f64) -> f64 {
        -sigmoid(-z)
    }

    fn second_derivative(&self, z: f64) -> f64 {
        let s = sigmoid(z);
        s * (1.0 - s)
    }

    fn curvature_bound(&self) -> Option<f64> {
        Some(0.25)
    }
}

pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Huber approximation of the hinge loss with smoothing width h:
///
/// ```text
/// 0                     z > 1 + h
/// (1 + h − z)² / (4h)   |1 − z| ≤ h
/// 1 − z                 z < 1 − h
/// ```
///
/// Curvature bound c = 1/(2h).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HuberLoss {
    h: f64,
}

impl HuberLoss {
    pub const DEFAULT_H: f64 = 0.5;

    /// `h` must be positive.
    pub fn new(h: f64) -> Option<Self> {
        (h > 0.0 && h.is_finite()).then_some(Self { h })
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

impl Default for HuberLoss {
    fn default() -> Self {
        Self { h: Self::DEFAULT_H }
    }
}

impl MarginLoss for HuberLoss {
    fn value(&self, z: f64) -> f64 {
        let h = self.h;
        if z > 1.0 + h {
            0.0
        } else if z < 1.0 - h {
            1.0 - z
        } else {
            (1.0 + h - z).powi(2) / (4.0 * h)
        }
    }

    fn derivative(&self, z: f64) -> f64 {
        let h = self.h;
        if z > 1.0 + h {
            0.0
        } else if z < 1.0 - h {
            -1.0
        } else {
            -(1.0 + h - z) / (2.0 * h)
        }
    }

    fn second_derivative(&self, z: f64) -> f64 {
        if (1.0 - z).abs() <= self.h {
            1.0 / (2.0 * self.h)
        } else {
            0.0
        }
    }

    fn curvature_bound(&self) -> Option<f64> {
        Some(1.0 / (2.0 * self.h))
    }
}

/// Loss of a regression prediction against a target.
///
/// `grad_norm_bound` (ζ) bounds ‖∇θ ℓᵢ‖₂ and `eigen_bound` (λ) bounds the
/// eigenvalues of ∇²θ ℓᵢ over the feasible set.
pub trait RegressionLoss: Send + Sync {
    fn value(&self, prediction: f64, target: f64) -> f64;
    fn derivative(&self, prediction: f64, target: f64) -> f64;
    fn second_derivative(&self, prediction: f64, target: f64) -> f64;
    fn grad_norm_bound(&self) -> f64;
    fn eigen_bound(&self) -> f64;
}

/// Half squared error (f − y)²/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquaredLoss {
    zeta: f64,
    lambda: f64,
}

impl SquaredLoss {
    /// Constants for ‖x‖₂ ≤ √p, ‖θ‖₂ ≤ √p and |y| ≤ p: ζ = 2p^(3/2), λ = p.
    pub fn for_dimension(p: usize) -> Self {
        let p = p as f64;
        Self {
            zeta: 2.0 * p.powf(1.5),
            lambda: p,
        }
    }
}

impl RegressionLoss for SquaredLoss {
    fn value(&self, prediction: f64, target: f64) -> f64 {
        0.5 * (prediction - target).powi(2)
    }

    fn derivative(&self, prediction: f64, target: f64) -> f64 {
        prediction - target
    }

    fn second_derivative(&self, _prediction: f64, _target: f64) -> f64 {
        1.0
    }

    fn grad_norm_bound(&self) -> f64 {
        self.zeta
    }

    fn eigen_bound(&self) -> f64 {
        self.lambda
    }
}
