//! Randomized mechanisms and their calibration.
//!
//! All three mechanisms take an explicit [`RandomSource`](crate::RandomSource)
//! and consume exactly one uniform per output coordinate (one per selection for
//! the exponential mechanism), so a fixed seed replays bit-for-bit.

mod budget;
mod exponential;
mod gaussian;
mod laplace;

pub use budget::{BudgetAllocation, DpVariant, NeighborModel, Norm, PrivacyBudget, SensitivitySpec};
pub use exponential::{exponential_mechanism, selection_probabilities};
pub use gaussian::{gaussian_mechanism, gaussian_noise, gaussian_sigma};
pub use laplace::{laplace_inverse_cdf, laplace_mechanism, laplace_noise};
