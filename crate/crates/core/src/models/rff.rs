use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Deserializer, Serialize};

use crate::{DpError, RandomSource, Result};

/// Random Fourier feature map for the Gaussian kernel exp(−β‖x − x′‖²).
///
/// Feature j is D^(−1/2)·cos(ωⱼᵀx + ψⱼ) with ωⱼ ~ N(0, 2β·I) and
/// ψⱼ ~ U[0, 2π]. Outputs always have norm at most 1, and twice the inner
/// product of two outputs estimates the kernel. Frequencies and phases are
/// rebuilt from `seed`, so only (D, β, seed, input_dim) are serialized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RffProjection {
    pub dim: usize,
    pub beta: f64,
    pub seed: u64,
    pub input_dim: usize,
    #[serde(skip)]
    omega: Array2<f64>,
    #[serde(skip)]
    phase: Vec<f64>,
}

#[derive(Deserialize)]
struct RffState {
    dim: usize,
    beta: f64,
    seed: u64,
    input_dim: usize,
}

impl<'de> Deserialize<'de> for RffProjection {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = RffState::deserialize(de)?;
        RffProjection::new(s.input_dim, s.dim, s.beta, s.seed).map_err(serde::de::Error::custom)
    }
}

impl RffProjection {
    pub fn new(input_dim: usize, dim: usize, beta: f64, seed: u64) -> Result<Self> {
        if dim == 0 || input_dim == 0 {
            return Err(DpError::input("feature dimensions must be positive"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(DpError::input(format!("kernel parameter must be positive, got {beta}")));
        }
        let mut rng = RandomSource::from_seed(seed);
        let sd = (2.0 * beta).sqrt();
        let omega = Array2::from_shape_fn((dim, input_dim), |_| sd * rng.standard_normal());
        let phase = (0..dim)
            .map(|_| rng.uniform_in(0.0, 2.0 * std::f64::consts::PI))
            .collect();
        Ok(Self {
            dim,
            beta,
            seed,
            input_dim,
            omega,
            phase,
        })
    }

    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(DpError::dims(format!(
                "feature map expects {} inputs, got {}",
                self.input_dim,
                x.len()
            )));
        }
        let norm = (self.dim as f64).sqrt().recip();
        Ok(self
            .omega
            .outer_iter()
            .zip(&self.phase)
            .map(|(w, psi)| {
                let arg: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + psi;
                norm * arg.cos()
            })
            .collect())
    }

    pub fn transform_matrix(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.input_dim {
            return Err(DpError::dims(format!(
                "feature map expects {} inputs, got {}",
                self.input_dim,
                x.ncols()
            )));
        }
        let mut out = Array2::zeros((x.nrows(), self.dim));
        let mut buf = vec![0.0; self.input_dim];
        for (i, row) in x.outer_iter().enumerate() {
            buf.iter_mut().zip(row.iter()).for_each(|(b, v)| *b = *v);
            let v = self.transform(&buf)?;
            out.row_mut(i).iter_mut().zip(v).for_each(|(o, v)| *o = v);
        }
        Ok(out)
    }
}

pub fn rff_transform(projection: &RffProjection, x: &[f64]) -> Result<Vec<f64>> {
    projection.transform(x)
}
