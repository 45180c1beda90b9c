//! Differentially private statistics and machine learning.
//!
//! `dpkit` bundles the building blocks needed to release statistics and
//! trained models under differential privacy:
//!
//! - [`mechanisms`]: Laplace, Gaussian (approximate and probabilistic DP) and
//!   exponential mechanisms, with per-coordinate budget allocation.
//! - [`accountant`]: an append-only budget ledger with sequential and parallel
//!   composition queries.
//! - [`stats`]: means, variances, covariances, pooled estimates, histograms,
//!   contingency tables and quantiles with sensitivities computed from
//!   caller-declared bounds.
//! - [`erm`]: output and objective perturbation for regularized empirical risk
//!   minimization, for both classification and regression losses.
//! - [`models`]: logistic regression, linear and Gaussian-kernel SVM (with
//!   observation weights), and linear regression.
//! - [`tuning`]: hyperparameter selection through the exponential mechanism.
//! - [`cli`]: the `dpkit` command-line front end (CSV in, JSON out).
//!
//! Every randomized operation draws from an explicit [`RandomSource`], so runs
//! replay exactly from a seed.

pub mod accountant;
pub mod cli;
pub mod erm;
mod error;
pub mod mechanisms;
pub mod models;
pub mod rng;
pub mod special;
pub mod stats;
pub mod tuning;

pub use error::{DpError, Result};
pub use rng::RandomSource;
