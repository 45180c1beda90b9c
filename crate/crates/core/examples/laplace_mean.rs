//! Release a bounded mean and variance with the Laplace mechanism.
use dpkit::stats::{mean_dp, var_dp, Bounds, NeighborChoice, StatRequest};
use dpkit::RandomSource;

fn main() -> dpkit::Result<()> {
    let mut rng = RandomSource::from_seed(7);
    let ages: Vec<f64> = (0..500).map(|_| 20.0 + 50.0 * rng.uniform()).collect();
    let bounds = Bounds::new(18.0, 90.0)?;

    let req = StatRequest::laplace(0.5)?.with_neighbor(NeighborChoice::Both);
    for r in mean_dp(&ages, bounds, &req, &mut rng)? {
        println!("mean ({:?}): {:.3}  sensitivity {:.4}", r.meta.neighbor, r.value, r.meta.sensitivity);
    }
    let v = &var_dp(&ages, bounds, &StatRequest::laplace(0.5)?, &mut rng)?[0];
    println!("variance: {:.3}", v.value);
    Ok(())
}
