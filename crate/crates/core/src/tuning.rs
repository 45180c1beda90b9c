//! Private hyperparameter selection.
//!
//! The data is split into m + 1 disjoint folds. Candidate i trains on fold i,
//! every candidate is scored on the last fold, and the exponential mechanism
//! picks one trained model. Because the folds are disjoint, candidate
//! training composes in parallel, so a tuning run costs the shared (ε, δ)
//! once.

use ndarray::{Array2, ArrayView2, Axis};

use crate::erm::ErmConfig;
use crate::mechanisms::{exponential_mechanism, selection_probabilities, PrivacyBudget};
use crate::models::{
    fit_linreg, fit_logistic, fit_svm, predict_linreg, predict_logistic, predict_svm, Kernel,
    LinregOptions, SvmOptions, TrainedModel,
};
use crate::stats::Bounds;
use crate::{DpError, RandomSource, Result};

/// Splits `0..n` into `m + 1` folds of nearly equal size.
///
/// Indices are permuted first and then cut into contiguous chunks; the first
/// `n mod (m+1)` folds get one extra index. The last fold is the validation
/// fold.
pub fn split_folds(n: usize, m: usize, rng: &mut RandomSource) -> Result<Vec<Vec<usize>>> {
    let k = m + 1;
    if m == 0 || n < k {
        return Err(DpError::input(format!(
            "{n} rows cannot be split into {k} folds for {m} candidates"
        )));
    }
    let perm = rng.permutation(n);
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let len = base + usize::from(i < extra);
        folds.push(perm[start..start + len].to_vec());
        start += len;
    }
    Ok(folds)
}

/// Negative number of mismatched labels; changing one record moves it by at
/// most 1.
pub fn classification_utility(predicted: &[f64], truth: &[f64]) -> f64 {
    -(predicted.iter().zip(truth).filter(|(a, b)| a != b).count() as f64)
}

/// Negative sum of squared errors with predictions clipped into the response
/// bounds.
pub fn regression_utility(predicted: &[f64], truth: &[f64], y_bounds: Bounds) -> f64 {
    -predicted
        .iter()
        .zip(truth)
        .map(|(p, y)| (y_bounds.clamp(*p) - y).powi(2))
        .sum::<f64>()
}

/// Sensitivity (c₁ − c₀)² of [`regression_utility`].
pub fn regression_utility_sensitivity(y_bounds: Bounds) -> f64 {
    y_bounds.width().powi(2)
}

/// One untrained classifier configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierCandidate {
    Logistic(ErmConfig),
    /// The options' `bounds` and `add_bias` are replaced by the tuning call's.
    Svm(ErmConfig, SvmOptions),
}

impl ClassifierCandidate {
    fn config(&self) -> &ErmConfig {
        match self {
            ClassifierCandidate::Logistic(c) | ClassifierCandidate::Svm(c, _) => c,
        }
    }
}

/// Outcome of a tuning run.
#[derive(Debug, Clone)]
pub struct Tuned {
    pub model: TrainedModel,
    pub selected: usize,
    /// Validation utilities of all candidates, in candidate order.
    pub utilities: Vec<f64>,
    /// Selection probabilities implied by the utilities.
    pub probabilities: Vec<f64>,
    pub epsilon: f64,
    pub delta: f64,
}

fn rows(x: ArrayView2<'_, f64>, idx: &[usize]) -> Array2<f64> {
    x.select(Axis(0), idx)
}

fn pick(values: &[f64], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| values[i]).collect()
}

/// Tunes a list of classifiers of one kind sharing one budget.
pub fn tune_classification(
    candidates: &[ClassifierCandidate],
    x: ArrayView2<'_, f64>,
    y: &[f64],
    bounds: &[Bounds],
    add_bias: bool,
    rng: &mut RandomSource,
) -> Result<Tuned> {
    let first = candidates
        .first()
        .ok_or_else(|| DpError::input("at least one candidate is required"))?;
    let budget = first.config().budget;
    for c in candidates {
        if std::mem::discriminant(c) != std::mem::discriminant(first) {
            return Err(DpError::input("candidates must all be the same model type"));
        }
        if c.config().budget != budget {
            return Err(DpError::input("candidates must share one privacy budget"));
        }
    }
    if y.len() != x.nrows() {
        return Err(DpError::dims(format!("{} rows but {} labels", x.nrows(), y.len())));
    }
    let folds = split_folds(x.nrows(), candidates.len(), rng)?;
    let (train, validation) = folds.split_at(candidates.len());
    let xv = rows(x, &validation[0]);
    let yv = pick(y, &validation[0]);

    let mut models = Vec::with_capacity(candidates.len());
    let mut utilities = Vec::with_capacity(candidates.len());
    for (cand, fold) in candidates.iter().zip(train) {
        let xt = rows(x, fold);
        let yt = pick(y, fold);
        let (model, predicted) = match cand {
            ClassifierCandidate::Logistic(cfg) => {
                let m = fit_logistic(xt.view(), &yt, bounds, cfg, add_bias, rng)?;
                let p = predict_logistic(&m, xv.view(), false)?;
                (m, p)
            }
            ClassifierCandidate::Svm(cfg, opts) => {
                let mut opts = opts.clone();
                opts.add_bias = add_bias;
                opts.bounds = (opts.kernel == Kernel::Linear).then(|| bounds.to_vec());
                let m = fit_svm(xt.view(), &yt, &opts, cfg, rng)?;
                let p = predict_svm(&m, xv.view(), false)?;
                (m, p)
            }
        };
        utilities.push(classification_utility(&predicted, &yv));
        models.push(model);
    }
    select(models, utilities, budget.epsilon(), 0.0, 1.0, rng)
}

/// Tunes linear regressions sharing one (ε, δ). `bounds` lists the feature
/// bounds followed by the response bounds.
pub fn tune_linreg(
    candidates: &[LinregOptions],
    x: ArrayView2<'_, f64>,
    y: &[f64],
    bounds: &[Bounds],
    add_bias: bool,
    rng: &mut RandomSource,
) -> Result<Tuned> {
    let first = candidates
        .first()
        .ok_or_else(|| DpError::input("at least one candidate is required"))?;
    if candidates
        .iter()
        .any(|c| c.epsilon != first.epsilon || c.delta != first.delta)
    {
        return Err(DpError::input("candidates must share one privacy budget"));
    }
    if y.len() != x.nrows() {
        return Err(DpError::dims(format!("{} rows but {} responses", x.nrows(), y.len())));
    }
    let y_bounds = *bounds
        .last()
        .ok_or_else(|| DpError::input("response bounds are required"))?;
    let folds = split_folds(x.nrows(), candidates.len(), rng)?;
    let (train, validation) = folds.split_at(candidates.len());
    let xv = rows(x, &validation[0]);
    let yv = pick(y, &validation[0]);

    let mut models = Vec::with_capacity(candidates.len());
    let mut utilities = Vec::with_capacity(candidates.len());
    for (cand, fold) in candidates.iter().zip(train) {
        let opts = LinregOptions { add_bias, ..*cand };
        let xt = rows(x, fold);
        let yt = pick(y, fold);
        let m = fit_linreg(xt.view(), &yt, bounds, &opts, rng)?;
        let p = predict_linreg(&m, xv.view())?;
        utilities.push(regression_utility(&p, &yv, y_bounds));
        models.push(m);
    }
    let sens = regression_utility_sensitivity(y_bounds);
    select(models, utilities, first.epsilon, first.delta, sens, rng)
}

fn select(
    mut models: Vec<TrainedModel>,
    utilities: Vec<f64>,
    epsilon: f64,
    delta: f64,
    sensitivity: f64,
    rng: &mut RandomSource,
) -> Result<Tuned> {
    let budget = PrivacyBudget::pure(epsilon)?;
    let probabilities = selection_probabilities(&utilities, epsilon, sensitivity, None)?;
    let selected = exponential_mechanism(&utilities, &budget, sensitivity, None, rng)?;
    Ok(Tuned {
        model: models.swap_remove(selected),
        selected,
        utilities,
        probabilities,
        epsilon,
        delta,
    })
}
