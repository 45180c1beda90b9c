mod common;

use common::*;
use dpkit::erm::{ErmConfig, Perturbation};
use dpkit::mechanisms::PrivacyBudget;
use dpkit::models::{
    fit_linreg, fit_logistic, fit_svm, predict_linreg, predict_logistic, predict_svm,
    FeatureScaler, LinregOptions, ModelKind, RffProjection, SvmOptions, TrainedModel,
};
use dpkit::stats::Bounds;
use dpkit::{DpError, RandomSource};
use ndarray::Array2;
use proptest::prelude::*;

fn b(lo: f64, hi: f64) -> Bounds {
    Bounds::new(lo, hi).unwrap()
}

fn cfg(eps: f64, gamma: f64) -> ErmConfig {
    ErmConfig::new(PrivacyBudget::pure(eps).unwrap(), gamma, Perturbation::Objective).unwrap()
}

#[test]
fn logistic_predictions_follow_threshold() {
    let mut rng = RandomSource::from_seed(1);
    let (x, y) = two_class_toy(50, &mut rng);
    let m = fit_logistic(x.view(), &y, &[b(-1.0, 1.0), b(-1.0, 1.0)], &cfg(1.0, 0.1), true, &mut rng).unwrap();
    let p = predict_logistic(&m, x.view(), true).unwrap();
    let labels = predict_logistic(&m, x.view(), false).unwrap();
    for (pi, li) in p.iter().zip(&labels) {
        assert!((0.0..=1.0).contains(pi));
        assert_eq!(*li, if *pi >= 0.5 { 1.0 } else { 0.0 });
    }
    assert_eq!(m.kind, ModelKind::Logistic);
    assert_eq!(m.coefficients.len(), 3);
}

#[test]
fn svm_predictions_follow_margin_sign() {
    let mut rng = RandomSource::from_seed(2);
    let (x, y) = two_class_toy(50, &mut rng);
    let m = fit_svm(x.view(), &y, &SvmOptions::linear(vec![b(-1.0, 1.0); 2]), &cfg(1.0, 0.1), &mut rng).unwrap();
    let raw = predict_svm(&m, x.view(), true).unwrap();
    let labels = predict_svm(&m, x.view(), false).unwrap();
    for (r, l) in raw.iter().zip(&labels) {
        assert_eq!(*l, if *r >= 0.0 { 1.0 } else { 0.0 });
    }
    assert!(predict_logistic(&m, x.view(), false).is_err());
}

#[test]
fn labels_outside_zero_one_are_rejected() {
    let x = Array2::from_shape_vec((2, 1), vec![0.1, 0.2]).unwrap();
    let r = fit_logistic(x.view(), &[0.0, 2.0], &[b(0.0, 1.0)], &cfg(1.0, 1.0), false, &mut RandomSource::from_seed(1));
    assert!(matches!(r, Err(DpError::ContractViolation(_))));
}

#[test]
fn features_outside_bounds_are_rejected() {
    let x = Array2::from_shape_vec((2, 1), vec![0.1, 1.5]).unwrap();
    let r = fit_logistic(x.view(), &[0.0, 1.0], &[b(0.0, 1.0)], &cfg(1.0, 1.0), false, &mut RandomSource::from_seed(1));
    assert!(matches!(r, Err(DpError::ContractViolation(_))));
}

#[test]
fn gaussian_kernel_needs_no_bounds() {
    let mut rng = RandomSource::from_seed(3);
    // raw features far outside [-1, 1]
    let x = Array2::from_shape_fn((60, 2), |(i, j)| (i as f64 - 30.0) * (1.0 + j as f64));
    let y: Vec<f64> = (0..60).map(|i| if i < 30 { 0.0 } else { 1.0 }).collect();
    let m = fit_svm(x.view(), &y, &SvmOptions::gaussian(40), &cfg(1.0, 1.0), &mut rng).unwrap();
    assert_eq!(m.kind, ModelKind::SvmGaussian);
    assert_eq!(m.coefficients.len(), 40);
    assert!(m.warnings.is_empty());
    let mut opts = SvmOptions::gaussian(40);
    opts.bounds = Some(vec![b(0.0, 1.0); 2]);
    let m = fit_svm(x.view(), &y, &opts, &cfg(1.0, 1.0), &mut rng).unwrap();
    assert_eq!(m.warnings.len(), 1);
}

#[test]
fn gaussian_svm_uses_transformed_features() {
    let mut rng = RandomSource::from_seed(4);
    let (x, y) = two_class_toy(40, &mut rng);
    let mut opts = SvmOptions::gaussian(30);
    opts.add_bias = true;
    let m = fit_svm(x.view(), &y, &opts, &cfg(1.0, 0.5), &mut rng).unwrap();
    let proj = m.rff.clone().unwrap();
    let raw = predict_svm(&m, x.view(), true).unwrap();
    for (i, r) in raw.iter().enumerate() {
        let v = proj.transform(&[x[[i, 0]], x[[i, 1]]]).unwrap();
        let manual = m.coefficients[0] + v.iter().zip(&m.coefficients[1..]).map(|(a, c)| a * c).sum::<f64>();
        assert!((manual - r).abs() < 1e-12);
    }
}

#[test]
fn weighted_svm_requires_weight_bound() {
    let mut rng = RandomSource::from_seed(5);
    let (x, y) = two_class_toy(20, &mut rng);
    let mut opts = SvmOptions::linear(vec![b(-1.0, 1.0); 2]);
    opts.weights = Some(vec![1.0; 40]);
    let out = ErmConfig::new(PrivacyBudget::pure(1.0).unwrap(), 1.0, Perturbation::Output).unwrap();
    assert!(fit_svm(x.view(), &y, &opts, &out, &mut rng).is_err());
    opts.weight_upper_bound = Some(2.0);
    assert!(fit_svm(x.view(), &y, &opts, &out, &mut rng).is_ok());
}

#[test]
fn linreg_recovers_slope_at_large_epsilon() {
    let mut rng = RandomSource::from_seed(6);
    let x = Array2::from_shape_fn((200, 2), |_| rng.uniform_in(-2.0, 2.0));
    let y: Vec<f64> = (0..200).map(|i| 1.0 + 0.5 * x[[i, 0]] - 0.25 * x[[i, 1]]).collect();
    let bounds = [b(-2.0, 2.0), b(-2.0, 2.0), b(-1.0, 3.0)];
    let opts = LinregOptions { epsilon: 1e9, delta: 0.0, gamma: 1e-6, add_bias: true };
    let m = fit_linreg(x.view(), &y, &bounds, &opts, &mut rng).unwrap();
    let want = [1.0, 0.5, -0.25];
    assert!(max_abs_diff(&m.coefficients, &want) < 1e-3, "{:?}", m.coefficients);
    let pred = predict_linreg(&m, x.view()).unwrap();
    assert!(max_abs_diff(&pred, &y) < 1e-3);
}

#[test]
fn linreg_rejects_response_outside_bounds() {
    let x = Array2::from_shape_vec((2, 1), vec![0.1, 0.2]).unwrap();
    let opts = LinregOptions { epsilon: 1.0, delta: 0.0, gamma: 1.0, add_bias: false };
    let r = fit_linreg(x.view(), &[0.0, 5.0], &[b(0.0, 1.0), b(-1.0, 1.0)], &opts, &mut RandomSource::from_seed(1));
    assert!(matches!(r, Err(DpError::ContractViolation(_))));
    let r = fit_linreg(x.view(), &[0.0, 0.5], &[b(0.0, 1.0)], &opts, &mut RandomSource::from_seed(1));
    assert!(r.is_err());
}

#[test]
fn model_json_round_trip_predicts_identically() {
    let mut rng = RandomSource::from_seed(7);
    let (x, y) = two_class_toy(30, &mut rng);
    let m = fit_svm(x.view(), &y, &SvmOptions::gaussian(16), &cfg(2.0, 1.0), &mut rng).unwrap();
    let back = TrainedModel::from_json(&m.to_json().unwrap()).unwrap();
    assert_eq!(predict_svm(&m, x.view(), true).unwrap(), predict_svm(&back, x.view(), true).unwrap());
    let mut text = m.to_json().unwrap();
    text = text.replacen("\"coefficients\": [", "\"coefficients\": [1.0,", 1);
    assert!(TrainedModel::from_json(&text).is_err());
}

#[test]
fn rff_seed_fully_determines_features() {
    let a = RffProjection::new(3, 64, 0.7, 99).unwrap();
    let c = RffProjection::new(3, 64, 0.7, 99).unwrap();
    let d = RffProjection::new(3, 64, 0.7, 100).unwrap();
    let x = [0.1, -0.5, 2.0];
    assert_eq!(a.transform(&x).unwrap(), c.transform(&x).unwrap());
    assert_ne!(a.transform(&x).unwrap(), d.transform(&x).unwrap());
    assert!(a.transform(&[0.0, 0.0]).is_err());
}

proptest! {
    #[test]
    fn classification_scaling_lands_in_unit_ball(
        limits in prop::collection::vec((-10.0f64..-0.1, 0.1f64..10.0), 1..6),
        fracs in prop::collection::vec(0.0f64..1.0, 36),
        bias in any::<bool>(),
    ) {
        let p = limits.len();
        let bounds: Vec<Bounds> = limits.iter().map(|(l, u)| b(*l, *u)).collect();
        let s = FeatureScaler::classification(&bounds, bias);
        let mut x = Array2::from_shape_fn((6, p + bias as usize), |(i, j)| {
            if bias && j == 0 {
                1.0
            } else {
                let (l, u) = limits[j - bias as usize];
                l + (u - l) * fracs[(i * 6 + j) % 36]
            }
        });
        s.scale_design(&mut x).unwrap();
        for row in x.rows() {
            prop_assert!(row.dot(&row).sqrt() <= 1.0 + 1e-12);
        }
        let theta: Vec<f64> = (0..s.dim()).map(|j| j as f64 - 1.5).collect();
        let round = s.scale_coefficients(&s.unscale_coefficients(&theta));
        for (a, c) in round.iter().zip(&theta) {
            prop_assert!((a - c).abs() < 1e-12 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn regression_scaling_lands_in_root_p_ball(
        limits in prop::collection::vec((-10.0f64..-0.1, 0.1f64..10.0), 1..6),
        frac in 0.0f64..1.0,
    ) {
        let bounds: Vec<Bounds> = limits.iter().map(|(l, u)| b(*l, *u)).collect();
        let s = FeatureScaler::regression(&bounds, true);
        let mut x = Array2::from_shape_fn((1, limits.len() + 1), |(_, j)| {
            if j == 0 { 1.0 } else {
                let (l, u) = limits[j - 1];
                if frac < 0.5 { l } else { u }
            }
        });
        s.scale_design(&mut x).unwrap();
        let row = x.row(0);
        prop_assert!(row.dot(&row).sqrt() <= (s.dim() as f64).sqrt() + 1e-12);
    }

    #[test]
    fn scaled_and_raw_scores_agree(seed in 0u64..200) {
        let mut rng = RandomSource::from_seed(seed);
        let (x, y) = two_class_toy(15, &mut rng);
        let bounds = [b(-1.0, 1.0), b(-2.0, 1.0)];
        let m = fit_logistic(x.view(), &y, &bounds, &cfg(1.0, 1.0), true, &mut rng).unwrap();
        let scaled = m.scaled_coefficients();
        let mut design = Array2::from_shape_fn((x.nrows(), 3), |(i, j)| if j == 0 { 1.0 } else { x[[i, j - 1]] });
        m.scaler.scale_design(&mut design).unwrap();
        let p = predict_logistic(&m, x.view(), true).unwrap();
        for i in 0..x.nrows() {
            let s: f64 = (0..3).map(|j| design[[i, j]] * scaled[j]).sum();
            prop_assert!((1.0 / (1.0 + (-s).exp()) - p[i]).abs() < 1e-12);
        }
    }
}
