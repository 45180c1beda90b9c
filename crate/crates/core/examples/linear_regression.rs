//! Linear regression under pure and approximate DP.
use dpkit::models::{fit_linreg, predict_linreg, LinregOptions};
use dpkit::stats::Bounds;
use dpkit::RandomSource;
use ndarray::Array2;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(8);
    let n = 5000;
    let x = Array2::from_shape_fn((n, 2), |_| rng.uniform_in(0.0, 10.0));
    let y: Vec<f64> = (0..n)
        .map(|i| (2.0 + 0.8 * x[[i, 0]] - 0.3 * x[[i, 1]] + rng.standard_normal()).clamp(-5.0, 15.0))
        .collect();
    let bounds = [Bounds::new(0.0, 10.0)?, Bounds::new(0.0, 10.0)?, Bounds::new(-5.0, 15.0)?];

    for delta in [0.0, 1e-6] {
        let opts = LinregOptions { epsilon: 1.0, delta, gamma: 0.1, add_bias: true };
        let m = fit_linreg(x.view(), &y, &bounds, &opts, &mut rng)?;
        let pred = predict_linreg(&m, x.view())?;
        let mse = pred.iter().zip(&y).map(|(p, t)| (p - t).powi(2)).sum::<f64>() / n as f64;
        println!("delta {delta:e}: coefficients {:?}, mse {mse:.3}", m.coefficients);
    }
    Ok(())
}
