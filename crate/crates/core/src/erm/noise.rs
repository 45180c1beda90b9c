use crate::RandomSource;

/// Uniform direction on the unit sphere in `dim` dimensions.
pub fn sphere_direction(dim: usize, rng: &mut RandomSource) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.standard_normal()).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 0.0 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// Gamma(shape = `dim`, scale = `scale`) draw, as a sum of `dim` exponentials.
pub fn gamma_magnitude(dim: usize, scale: f64, rng: &mut RandomSource) -> f64 {
    scale * (0..dim).map(|_| rng.standard_exponential()).sum::<f64>()
}

/// Vector with density proportional to exp(−‖b‖₂ / scale).
///
/// The norm is Gamma(dim, scale) and the direction is uniform. The
/// direction is drawn first.
pub fn spherical_laplace(dim: usize, scale: f64, rng: &mut RandomSource) -> Vec<f64> {
    let dir = sphere_direction(dim, rng);
    let r = gamma_magnitude(dim, scale, rng);
    dir.into_iter().map(|d| d * r).collect()
}
