//! Logistic regression with objective perturbation.
use dpkit::erm::{ErmConfig, Perturbation};
use dpkit::mechanisms::PrivacyBudget;
use dpkit::models::{fit_logistic, predict_logistic};
use dpkit::stats::Bounds;
use dpkit::RandomSource;
use ndarray::Array2;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(1);
    let n = 2000;
    let x = Array2::from_shape_fn((n, 2), |_| rng.uniform_in(-1.0, 1.0));
    let y: Vec<f64> = (0..n)
        .map(|i| if x[[i, 0]] - 0.5 * x[[i, 1]] + 0.2 * rng.standard_normal() > 0.0 { 1.0 } else { 0.0 })
        .collect();
    let bounds = vec![Bounds::new(-1.0, 1.0)?; 2];

    let cfg = ErmConfig::new(PrivacyBudget::pure(1.0)?, 0.01, Perturbation::Objective)?;
    let model = fit_logistic(x.view(), &y, &bounds, &cfg, true, &mut rng)?;
    let pred = predict_logistic(&model, x.view(), false)?;
    let acc = pred.iter().zip(&y).filter(|(p, t)| p == t).count() as f64 / n as f64;
    println!("coefficients {:?}", model.coefficients);
    println!("training accuracy {acc:.3}");
    Ok(())
}
