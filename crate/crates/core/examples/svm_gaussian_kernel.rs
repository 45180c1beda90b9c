//! Nonlinear SVM through random Fourier features.
use dpkit::erm::{ErmConfig, Perturbation};
use dpkit::mechanisms::PrivacyBudget;
use dpkit::models::{fit_svm, predict_svm, SvmOptions};
use dpkit::RandomSource;
use ndarray::Array2;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(4);
    let n = 3000;
    // inside versus outside a circle
    let x = Array2::from_shape_fn((n, 2), |_| rng.uniform_in(-2.0, 2.0));
    let y: Vec<f64> = (0..n).map(|i| ((x[[i, 0]].powi(2) + x[[i, 1]].powi(2)) < 1.5) as u8 as f64).collect();

    let mut opts = SvmOptions::gaussian(200);
    opts.kernel_param = Some(1.0);
    opts.add_bias = true;
    let cfg = ErmConfig::new(PrivacyBudget::pure(2.0)?, 0.001, Perturbation::Objective)?;
    let model = fit_svm(x.view(), &y, &opts, &cfg, &mut rng)?;
    let pred = predict_svm(&model, x.view(), false)?;
    let acc = pred.iter().zip(&y).filter(|(p, t)| p == t).count() as f64 / n as f64;
    println!("training accuracy {acc:.3} with {} coefficients", model.coefficients.len());
    Ok(())
}
