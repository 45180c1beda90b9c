use serde::{Deserialize, Serialize};

use crate::{DpError, Result};

/// Public lower and upper limits for one variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: f64,
    upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(DpError::InvalidBounds(format!(
                "bounds must be finite, got [{lower}, {upper}]"
            )));
        }
        if !(lower < upper) {
            return Err(DpError::InvalidBounds(format!(
                "lower bound {lower} must be below upper bound {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Largest absolute value any in-bounds point can take.
    pub fn max_abs(&self) -> f64 {
        self.lower.abs().max(self.upper.abs())
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.max(self.lower).min(self.upper)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lower - tol && x <= self.upper + tol
    }
}

/// Bounds for every column of a dataset, in column order.
pub type BoundsManifest = Vec<Bounds>;

/// A vector whose every entry lies within its bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ClippedVector {
    values: Vec<f64>,
    bounds: Bounds,
}

impl ClippedVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Clamps every value into `bounds`.
pub fn clip(x: &[f64], bounds: Bounds) -> Result<ClippedVector> {
    if x.is_empty() {
        return Err(DpError::input("cannot clip an empty vector"));
    }
    if x.iter().any(|v| v.is_nan()) {
        return Err(DpError::input("input contains NaN"));
    }
    Ok(ClippedVector {
        values: x.iter().map(|&v| bounds.clamp(v)).collect(),
        bounds,
    })
}

/// Several clipped groups sharing one set of bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCollection {
    groups: Vec<ClippedVector>,
    n_max: usize,
    approx_n_max: bool,
}

impl GroupCollection {
    /// With `approx_n_max` the largest group size is replaced by the total
    /// size, which avoids revealing it and only widens the sensitivity.
    pub fn new(groups: &[Vec<f64>], bounds: Bounds, approx_n_max: bool) -> Result<Self> {
        let groups = groups
            .iter()
            .map(|g| clip(g, bounds))
            .collect::<Result<Vec<_>>>()?;
        let total: usize = groups.iter().map(|g| g.len()).sum();
        let largest = groups.iter().map(|g| g.len()).max().unwrap_or(0);
        Ok(Self {
            groups,
            n_max: if approx_n_max { total } else { largest },
            approx_n_max,
        })
    }

    pub fn groups(&self) -> &[ClippedVector] {
        &self.groups
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn approx_n_max(&self) -> bool {
        self.approx_n_max
    }

    pub fn total_len(&self) -> usize {
        self.groups.iter().map(|g| g.len()).sum()
    }
}
