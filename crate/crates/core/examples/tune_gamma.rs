//! Choose the regularization strength privately.
use dpkit::erm::{ErmConfig, Perturbation};
use dpkit::mechanisms::PrivacyBudget;
use dpkit::stats::Bounds;
use dpkit::tuning::{tune_classification, ClassifierCandidate};
use dpkit::RandomSource;
use ndarray::Array2;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(12);
    let n = 4000;
    let x = Array2::from_shape_fn((n, 3), |_| rng.uniform_in(-1.0, 1.0));
    let y: Vec<f64> = (0..n)
        .map(|i| (x[[i, 0]] + x[[i, 2]] + 0.3 * rng.standard_normal() > 0.0) as u8 as f64)
        .collect();

    let budget = PrivacyBudget::pure(1.0)?;
    let grid = [1e-4, 1e-3, 1e-2, 1e-1, 1.0];
    let candidates = grid
        .iter()
        .map(|&g| Ok(ClassifierCandidate::Logistic(ErmConfig::new(budget, g, Perturbation::Objective)?)))
        .collect::<dpkit::Result<Vec<_>>>()?;
    let tuned = tune_classification(&candidates, x.view(), &y, &[Bounds::new(-1.0, 1.0)?; 3], false, &mut rng)?;
    println!("selected gamma {}", grid[tuned.selected]);
    println!("coefficients {:?}", tuned.model.coefficients);
    Ok(())
}
