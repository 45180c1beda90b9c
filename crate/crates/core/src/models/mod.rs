//! Private classifiers and regressors built on [`crate::erm`].
//!
//! Every fit takes raw data plus declared bounds, rescales into the region the
//! privacy analysis needs, trains privately and maps the coefficients back to
//! the original feature scale. Predictions are post-processing and never
//! spend budget.

mod linreg;
mod logistic;
mod rff;
mod scaler;
mod svm;
mod trained;

pub use linreg::{fit_linreg, predict_linreg, LinregOptions};
pub use logistic::{fit_logistic, predict_logistic};
pub use rff::{rff_transform, RffProjection};
pub use scaler::FeatureScaler;
pub use svm::{fit_svm, huber_loss, predict_svm, Kernel, SvmOptions};
pub use trained::{ConfigSnapshot, ModelKind, ResponseScaling, TrainedModel};

use ndarray::{Array2, ArrayView2};

use crate::stats::Bounds;
use crate::{DpError, Result};

pub(crate) const BOUND_TOLERANCE: f64 = 1e-9;

pub(crate) fn check_within_bounds(x: ArrayView2<'_, f64>, bounds: &[Bounds]) -> Result<()> {
    if bounds.len() != x.ncols() {
        return Err(DpError::dims(format!(
            "{} bounds for {} feature columns",
            bounds.len(),
            x.ncols()
        )));
    }
    for (i, row) in x.outer_iter().enumerate() {
        for (j, (&v, b)) in row.iter().zip(bounds).enumerate() {
            if !b.contains(v, BOUND_TOLERANCE) {
                return Err(DpError::ContractViolation(format!(
                    "value {v} at row {i}, column {j} lies outside [{}, {}]",
                    b.lower(),
                    b.upper()
                )));
            }
        }
    }
    Ok(())
}

/// Maps {0, 1} labels to {−1, +1}.
pub(crate) fn signed_labels(y: &[f64]) -> Result<Vec<f64>> {
    y.iter()
        .enumerate()
        .map(|(i, &v)| match v {
            v if v == 0.0 => Ok(-1.0),
            v if v == 1.0 => Ok(1.0),
            v => Err(DpError::ContractViolation(format!(
                "label {v} at row {i} is not 0 or 1"
            ))),
        })
        .collect()
}

/// Prepends a column of ones when `add_bias` is set.
pub(crate) fn with_bias(x: ArrayView2<'_, f64>, add_bias: bool) -> Array2<f64> {
    if !add_bias {
        return x.to_owned();
    }
    let (n, p) = x.dim();
    let mut out = Array2::ones((n, p + 1));
    out.slice_mut(ndarray::s![.., 1..]).assign(&x);
    out
}

pub(crate) fn linear_scores(model: &TrainedModel, x: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
    let design = match &model.rff {
        Some(rff) => rff.transform_matrix(x)?,
        None => {
            if x.ncols() != model.input_dim() {
                return Err(DpError::dims(format!(
                    "model expects {} feature columns, got {}",
                    model.input_dim(),
                    x.ncols()
                )));
            }
            x.to_owned()
        }
    };
    let design = with_bias(design.view(), model.add_bias);
    Ok(design
        .outer_iter()
        .map(|row| row.iter().zip(&model.coefficients).map(|(a, b)| a * b).sum())
        .collect())
}
