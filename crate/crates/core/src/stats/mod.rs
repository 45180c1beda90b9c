//! Differentially private descriptive statistics.
//!
//! Sensitivities come from caller-declared global bounds, never from the
//! data. Inputs are clipped to their bounds before any statistic is computed.

mod bounds;
mod counts;
mod moments;
mod quantile;
mod request;

pub use bounds::{clip, Bounds, BoundsManifest, ClippedVector, GroupCollection};
pub use counts::{
    histogram_dp, histogram_sensitivity, table_dp, Breaks, ContingencyTable, Factor, Histogram,
    HistogramSpec,
};
pub use moments::{
    cov_dp, cov_sensitivity, mean_dp, mean_sensitivity, pooled_cov_dp, pooled_cov_sensitivity,
    pooled_var_dp, pooled_var_sensitivity, sample_cov, sample_mean, sample_var, sd_dp, var_dp,
    var_sensitivity, PairedGroup,
};
pub use quantile::{
    median_dp, quantile_dp, quantile_intervals, QuantileInterval, QUANTILE_UTILITY_SENSITIVITY,
};
pub use request::{MechanismKind, NeighborChoice, Release, ReleaseMeta, StatRequest};
