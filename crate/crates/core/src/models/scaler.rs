use serde::{Deserialize, Serialize};

use crate::stats::Bounds;
use crate::{DpError, Result};

/// Rescales a design matrix so its rows satisfy a norm bound.
///
/// Column j is divided by `divisors[j]`, the largest absolute value its
/// bounds allow, and then every column by `global_divisor`. The bias column,
/// when present, comes first with divisor 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    pub divisors: Vec<f64>,
    pub global_divisor: f64,
    pub bias_included: bool,
}

impl FeatureScaler {
    /// Rows end up with ℓ2 norm at most 1.
    pub fn classification(bounds: &[Bounds], add_bias: bool) -> Self {
        let mut s = Self::regression(bounds, add_bias);
        s.global_divisor = (s.divisors.len() as f64).sqrt();
        s
    }

    /// Rows end up with ℓ2 norm at most √p.
    pub fn regression(bounds: &[Bounds], add_bias: bool) -> Self {
        let mut divisors = Vec::with_capacity(bounds.len() + add_bias as usize);
        if add_bias {
            divisors.push(1.0);
        }
        divisors.extend(bounds.iter().map(Bounds::max_abs));
        Self {
            divisors,
            global_divisor: 1.0,
            bias_included: add_bias,
        }
    }

    /// Number of columns after the optional bias column is added.
    pub fn dim(&self) -> usize {
        self.divisors.len()
    }

    /// Scales a design matrix that already contains the bias column.
    pub fn scale_design(&self, x: &mut ndarray::Array2<f64>) -> Result<()> {
        if x.ncols() != self.dim() {
            return Err(DpError::dims(format!(
                "scaler has {} columns, design has {}",
                self.dim(),
                x.ncols()
            )));
        }
        for mut row in x.outer_iter_mut() {
            for (v, d) in row.iter_mut().zip(&self.divisors) {
                *v /= d * self.global_divisor;
            }
        }
        Ok(())
    }

    /// Coefficients fitted on scaled data to coefficients on raw data.
    pub fn unscale_coefficients(&self, theta: &[f64]) -> Vec<f64> {
        theta
            .iter()
            .zip(&self.divisors)
            .map(|(t, d)| t / (d * self.global_divisor))
            .collect()
    }

    /// Inverse of [`unscale_coefficients`](Self::unscale_coefficients).
    pub fn scale_coefficients(&self, theta: &[f64]) -> Vec<f64> {
        theta
            .iter()
            .zip(&self.divisors)
            .map(|(t, d)| t * d * self.global_divisor)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn classification_rows_fit_in_unit_ball() {
        let bounds = [Bounds::new(-2.0, 5.0).unwrap(), Bounds::new(1.0, 3.0).unwrap()];
        let s = FeatureScaler::classification(&bounds, true);
        assert_eq!(s.divisors, vec![1.0, 5.0, 3.0]);
        let mut x = array![[1.0, 5.0, 3.0], [1.0, -2.0, 1.0]];
        s.scale_design(&mut x).unwrap();
        for row in x.outer_iter() {
            assert!(row.dot(&row).sqrt() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let bounds = [Bounds::new(-0.3, 0.1).unwrap(), Bounds::new(-40.0, 7.0).unwrap()];
        let s = FeatureScaler::classification(&bounds, false);
        let theta = [0.123, -9.75];
        let back = s.scale_coefficients(&s.unscale_coefficients(&theta));
        for (a, b) in theta.iter().zip(&back) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
