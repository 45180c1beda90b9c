//! Weighted linear SVM, as used for outcome-weighted treatment rules.
use dpkit::erm::{ErmConfig, Perturbation};
use dpkit::mechanisms::PrivacyBudget;
use dpkit::models::{fit_svm, predict_svm, SvmOptions};
use dpkit::stats::Bounds;
use dpkit::RandomSource;
use ndarray::Array2;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(9);
    let n = 1500;
    let x = Array2::from_shape_fn((n, 2), |_| rng.uniform_in(-1.0, 1.0));
    // treatment received, and an outcome that rewards matching sign(x0)
    let a: Vec<f64> = (0..n).map(|_| (rng.uniform() < 0.5) as u8 as f64).collect();
    let reward: Vec<f64> = (0..n)
        .map(|i| {
            let good = (x[[i, 0]] > 0.0) == (a[i] == 1.0);
            (if good { 2.0 } else { 0.5 }) + 0.3 * rng.uniform()
        })
        .collect();
    // weight = outcome / propensity, bounded by 2.3 / 0.5
    let weights: Vec<f64> = reward.iter().map(|r| r / 0.5).collect();

    let mut opts = SvmOptions::linear(vec![Bounds::new(-1.0, 1.0)?; 2]);
    opts.weights = Some(weights);
    opts.weight_upper_bound = Some(4.6);
    // output noise has scale 2·w/(γε) whatever n is, so γ grows with n
    let cfg = ErmConfig::new(PrivacyBudget::pure(2.0)?, 0.05 * n as f64, Perturbation::Output)?;
    let model = fit_svm(x.view(), &a, &opts, &cfg, &mut rng)?;

    let rule = predict_svm(&model, x.view(), false)?;
    let agree = (0..n).filter(|&i| (rule[i] == 1.0) == (x[[i, 0]] > 0.0)).count() as f64 / n as f64;
    println!("coefficients {:?}", model.coefficients);
    println!("rule matches the optimal one on {:.1}% of rows", 100.0 * agree);
    Ok(())
}
