use serde::{Deserialize, Serialize};

use crate::mechanisms::{exponential_mechanism, PrivacyBudget};
use crate::stats::bounds::{clip, Bounds};
use crate::{DpError, RandomSource, Result};

/// ℓ1 sensitivity of the rank utility −|i − q·n| (either neighbor model).
pub const QUANTILE_UTILITY_SENSITIVITY: f64 = 1.0;

/// A candidate interval between consecutive order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileInterval {
    pub lower: f64,
    pub upper: f64,
    pub utility: f64,
}

impl QuantileInterval {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Candidate intervals [zᵢ, zᵢ₊₁], i = 0..=n, over the sorted clipped data
/// padded with the bounds, each scored −|i − q·n|.
pub fn quantile_intervals(x: &[f64], q: f64, bounds: Bounds) -> Result<Vec<QuantileInterval>> {
    if !(0.0..=1.0).contains(&q) {
        return Err(DpError::input(format!("quantile {q} is outside [0, 1]")));
    }
    let mut z = Vec::with_capacity(x.len() + 2);
    z.push(bounds.lower());
    if !x.is_empty() {
        let mut sorted = clip(x, bounds)?.values().to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        z.extend(sorted);
    }
    z.push(bounds.upper());
    let target = q * x.len() as f64;
    Ok(z.windows(2)
        .enumerate()
        .map(|(i, w)| QuantileInterval {
            lower: w[0],
            upper: w[1],
            utility: -(i as f64 - target).abs(),
        })
        .collect())
}

/// Private q-quantile by the exponential mechanism over inter-order-statistic
/// intervals, weighted by interval length.
///
/// With `uniform_sampling` the release is a uniform draw from the selected
/// interval; otherwise it is the interval's left endpoint.
pub fn quantile_dp(
    x: &[f64],
    q: f64,
    budget: &PrivacyBudget,
    bounds: Bounds,
    uniform_sampling: bool,
    rng: &mut RandomSource,
) -> Result<f64> {
    let intervals = quantile_intervals(x, q, bounds)?;
    let utility: Vec<f64> = intervals.iter().map(|iv| iv.utility).collect();
    let measure: Vec<f64> = intervals.iter().map(|iv| iv.length()).collect();
    // Interval lengths sum to the bound width, so the measure is never all zero.
    let chosen = intervals[exponential_mechanism(
        &utility,
        budget,
        QUANTILE_UTILITY_SENSITIVITY,
        Some(&measure),
        rng,
    )?];
    if uniform_sampling {
        Ok(rng.uniform_in(chosen.lower, chosen.upper))
    } else {
        Ok(chosen.lower)
    }
}

pub fn median_dp(
    x: &[f64],
    budget: &PrivacyBudget,
    bounds: Bounds,
    uniform_sampling: bool,
    rng: &mut RandomSource,
) -> Result<f64> {
    quantile_dp(x, 0.5, budget, bounds, uniform_sampling, rng)
}
