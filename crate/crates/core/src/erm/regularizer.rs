/// Regularizer R(θ) in the objective (γ/n)·R(θ).
pub trait Regularizer: Send + Sync {
    fn value(&self, theta: &[f64]) -> f64;
    fn gradient(&self, theta: &[f64], out: &mut [f64]);
    /// Whether R is 1-strongly convex, as both classification paths require.
    fn strongly_convex(&self) -> bool;
    /// Whether R is twice differentiable, as objective perturbation requires.
    fn twice_differentiable(&self) -> bool;
}

/// R(θ) = ½‖θ‖².
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct L2Regularizer;

impl Regularizer for L2Regularizer {
    fn value(&self, theta: &[f64]) -> f64 {
        0.5 * theta.iter().map(|t| t * t).sum::<f64>()
    }

    fn gradient(&self, theta: &[f64], out: &mut [f64]) {
        out.copy_from_slice(theta);
    }

    fn strongly_convex(&self) -> bool {
        true
    }

    fn twice_differentiable(&self) -> bool {
        true
    }
}
