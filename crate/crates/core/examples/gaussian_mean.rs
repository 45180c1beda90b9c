//! Approximate and probabilistic DP releases through the Gaussian mechanism.
use dpkit::mechanisms::{gaussian_mechanism, gaussian_sigma, PrivacyBudget, SensitivitySpec};
use dpkit::stats::{cov_dp, Bounds, StatRequest};
use dpkit::RandomSource;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(11);
    let x: Vec<f64> = (0..400).map(|_| rng.uniform()).collect();
    let y: Vec<f64> = x.iter().map(|v| (0.6 * v + 0.2 * rng.uniform()).min(1.0)).collect();
    let unit = Bounds::new(0.0, 1.0)?;

    let adp = PrivacyBudget::approximate(0.5, 1e-5)?;
    let pdp = PrivacyBudget::probabilistic(0.5, 1e-5)?;
    println!("sigma per unit sensitivity: approximate {:.3}, probabilistic {:.3}",
        gaussian_sigma(&adp, 1.0)?, gaussian_sigma(&pdp, 1.0)?);

    let c = &cov_dp(&x, &y, unit, unit, &StatRequest::gaussian(pdp)?, &mut rng)?[0];
    println!("covariance: {:.4}", c.value);

    // two coordinates released jointly; the l2 sensitivity is composed
    let sens = SensitivitySpec::l2(vec![0.01, 0.02])?;
    let noisy = gaussian_mechanism(&[0.3, 0.7], &adp, &sens, None, &mut rng)?;
    println!("joint release: {noisy:?}");
    Ok(())
}
