//! Private median and quartiles.
use dpkit::mechanisms::PrivacyBudget;
use dpkit::stats::{median_dp, quantile_dp, Bounds};
use dpkit::RandomSource;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(2);
    let incomes: Vec<f64> = (0..300).map(|_| 30_000.0 * (1.0 + rng.standard_exponential())).collect();
    let bounds = Bounds::new(0.0, 250_000.0)?;
    let budget = PrivacyBudget::pure(0.5)?;

    println!("median: {:.0}", median_dp(&incomes, &budget, bounds, true, &mut rng)?);
    for q in [0.25, 0.75] {
        println!("q{q}: {:.0}", quantile_dp(&incomes, q, &budget, bounds, true, &mut rng)?);
    }
    Ok(())
}
