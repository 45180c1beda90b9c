//! Private regularized empirical risk minimization.
//!
//! Two frameworks share one smooth convex minimizer:
//!
//! - [`erm_cms`] for binary classification with a margin loss, by output
//!   perturbation (optionally with bounded observation weights) or objective
//!   perturbation.
//! - [`erm_kst`] for regression losses with bounded gradient norm and
//!   rank-one Hessians, by objective perturbation over a closed ball, under
//!   pure (Gamma-magnitude noise) or approximate (Gaussian noise) DP.
//!
//! Both solve problems of the form
//!
//! ```text
//! (1/n) Σ wᵢ ℓᵢ(θ) + (γ/n) R(θ) + (Δ/2n) ‖θ‖² + bᵀθ / n
//! ```

mod cms;
mod kst;
mod loss;
mod minimize;
mod noise;
mod regularizer;

pub use cms::{erm_cms, objective_slack, ErmConfig, ErmOutput, Perturbation};
pub use kst::{erm_kst, kst_gaussian_sigma, KstConfig};
pub(crate) use loss::sigmoid;
pub use loss::{HuberLoss, LogisticLoss, MarginLoss, RegressionLoss, SquaredLoss};
pub use minimize::{minimize, Domain, Minimum, MinimizeOptions, Objective};
pub use noise::{gamma_magnitude, sphere_direction, spherical_laplace};
pub use regularizer::{L2Regularizer, Regularizer};
