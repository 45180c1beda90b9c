use crate::stats::bounds::{clip, Bounds, GroupCollection};
use crate::stats::request::{release_scalar, Release, StatRequest};
use crate::{DpError, RandomSource, Result};

pub fn sample_mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample variance with the n − 1 denominator.
pub fn sample_var(x: &[f64]) -> f64 {
    sample_cov(x, x)
}

/// Sample covariance with the n − 1 denominator.
pub fn sample_cov(x1: &[f64], x2: &[f64]) -> f64 {
    let n = x1.len() as f64;
    let m1 = sample_mean(x1);
    let m2 = sample_mean(x2);
    x1.iter()
        .zip(x2)
        .map(|(a, b)| (a - m1) * (b - m2))
        .sum::<f64>()
        / (n - 1.0)
}

pub fn mean_sensitivity(bounds: Bounds, n: usize) -> f64 {
    bounds.width() / n as f64
}

pub fn var_sensitivity(bounds: Bounds, n: usize) -> f64 {
    bounds.width().powi(2) / n as f64
}

pub fn cov_sensitivity(b1: Bounds, b2: Bounds, n: usize) -> f64 {
    b1.width() * b2.width() / n as f64
}

/// Sensitivity of the pooled variance Σ(nⱼ − 1)sⱼ²/(N − k).
pub fn pooled_var_sensitivity(bounds: Bounds, n_max: usize, total: usize, groups: usize) -> f64 {
    pooled_cov_sensitivity(bounds, bounds, n_max, total, groups)
}

pub fn pooled_cov_sensitivity(
    b1: Bounds,
    b2: Bounds,
    n_max: usize,
    total: usize,
    groups: usize,
) -> f64 {
    let n_max = n_max as f64;
    b1.width() * b2.width() * (n_max - 1.0) / (n_max * (total - groups) as f64)
}

/// Private mean of `x` clipped to `bounds`; Δ = (u − l)/n under both
/// neighbor models.
pub fn mean_dp(
    x: &[f64],
    bounds: Bounds,
    req: &StatRequest,
    rng: &mut RandomSource,
) -> Result<Vec<Release<f64>>> {
    let c = clip(x, bounds)?;
    let sens = mean_sensitivity(bounds, c.len());
    release_scalar("mean", sample_mean(c.values()), req, |_| sens, rng)
}

/// Private sample variance; Δ = (u − l)²/n under both neighbor models.
pub fn var_dp(
    x: &[f64],
    bounds: Bounds,
    req: &StatRequest,
    rng: &mut RandomSource,
) -> Result<Vec<Release<f64>>> {
    if x.len() < 2 {
        return Err(DpError::input("variance needs at least two observations"));
    }
    let c = clip(x, bounds)?;
    let sens = var_sensitivity(bounds, c.len());
    release_scalar("var", sample_var(c.values()), req, |_| sens, rng)
}

/// Private standard deviation: the square root of one private variance,
/// floored at zero first.
pub fn sd_dp(
    x: &[f64],
    bounds: Bounds,
    req: &StatRequest,
    rng: &mut RandomSource,
) -> Result<Vec<Release<f64>>> {
    Ok(var_dp(x, bounds, req, rng)?
        .into_iter()
        .map(|mut r| {
            r.value = r.value.max(0.0).sqrt();
            r.meta.statistic = "sd".into();
            r
        })
        .collect())
}

/// Private sample covariance; Δ = (u₁ − l₁)(u₂ − l₂)/n.
pub fn cov_dp(
    x1: &[f64],
    x2: &[f64],
    bounds1: Bounds,
    bounds2: Bounds,
    req: &StatRequest,
    rng: &mut RandomSource,
) -> Result<Vec<Release<f64>>> {
    if x1.len() != x2.len() {
        return Err(DpError::dims(format!(
            "covariance inputs have lengths {} and {}",
            x1.len(),
            x2.len()
        )));
    }
    if x1.len() < 2 {
        return Err(DpError::input("covariance needs at least two observations"));
    }
    let c1 = clip(x1, bounds1)?;
    let c2 = clip(x2, bounds2)?;
    let sens = cov_sensitivity(bounds1, bounds2, c1.len());
    release_scalar("cov", sample_cov(c1.values(), c2.values()), req, |_| sens, rng)
}

fn pooled_sum(groups: &[(&[f64], &[f64])]) -> (f64, usize) {
    let mut total = 0.0;
    let mut n = 0;
    for (a, b) in groups {
        total += sample_cov(a, b) * (a.len() as f64 - 1.0);
        n += a.len();
    }
    (total, n)
}

/// Private pooled variance Σ(nⱼ − 1)sⱼ²/(N − k) over at least two groups.
pub fn pooled_var_dp(
    groups: &GroupCollection,
    req: &StatRequest,
    rng: &mut RandomSource,
) -> Result<Vec<Release<f64>>> {
    let k = groups.groups().len();
    if k < 2 {
        return Err(DpError::input("pooled variance needs at least two groups"));
    }
    if groups.groups().iter().any(|g| g.len() < 2) {
        return Err(DpError::input("every group needs at least two observations"));
    }
    let pairs: Vec<(&[f64], &[f64])> = groups
        .groups()
        .iter()
        .map(|g| (g.values(), g.values()))
        .collect();
    let (ss, total) = pooled_sum(&pairs);
    let value = ss / (total - k) as f64;
    let bounds = groups.groups()[0].bounds();
    let sens = pooled_var_sensitivity(bounds, groups.n_max(), total, k);
    release_scalar("pooled_var", value, req, |_| sens, rng)
}

/// One group of paired observations for the pooled covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedGroup {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
}

/// Private pooled covariance over groups of paired columns.
pub fn pooled_cov_dp(
    groups: &[PairedGroup],
    bounds1: Bounds,
    bounds2: Bounds,
    approx_n_max: bool,
    req: &StatRequest,
    rng: &mut RandomSource,
) -> Result<Vec<Release<f64>>> {
    let k = groups.len();
    if k < 2 {
        return Err(DpError::input("pooled covariance needs at least two groups"));
    }
    let mut clipped = Vec::with_capacity(k);
    for g in groups {
        if g.x1.len() != g.x2.len() {
            return Err(DpError::dims("paired group columns differ in length"));
        }
        if g.x1.len() < 2 {
            return Err(DpError::input("every group needs at least two observations"));
        }
        clipped.push((clip(&g.x1, bounds1)?, clip(&g.x2, bounds2)?));
    }
    let pairs: Vec<(&[f64], &[f64])> = clipped
        .iter()
        .map(|(a, b)| (a.values(), b.values()))
        .collect();
    let (ss, total) = pooled_sum(&pairs);
    let n_max = if approx_n_max {
        total
    } else {
        groups.iter().map(|g| g.x1.len()).max().unwrap_or(0)
    };
    let value = ss / (total - k) as f64;
    let sens = pooled_cov_sensitivity(bounds1, bounds2, n_max, total, k);
    release_scalar("pooled_cov", value, req, |_| sens, rng)
}
