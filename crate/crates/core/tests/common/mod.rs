//! Helpers shared by the integration tests and the acceptance runner.
//!
//! Everything here is written independently of the library internals so it
//! can serve as an oracle: the solvers below use Newton steps and dense
//! linear algebra, never the library's minimizer.

#![allow(dead_code)]

use dpkit::RandomSource;
use ndarray::Array2;

/// Result of a two-sided empirical privacy-loss check on binned outputs.
#[derive(Debug, Clone)]
pub struct DpCheck {
    /// Largest violation of P₁ ≤ e^ε P₂ + δ + 3σ̂ over bins and directions;
    /// a value ≤ 0 means every bin passed.
    pub worst_excess: f64,
    pub worst_bin: usize,
}

impl DpCheck {
    pub fn passed(&self) -> bool {
        self.worst_excess <= 0.0
    }
}

/// Compares two count vectors over the same bins.
pub fn check_counts(c1: &[u64], c2: &[u64], epsilon: f64, delta: f64) -> DpCheck {
    let n1: u64 = c1.iter().sum();
    let n2: u64 = c2.iter().sum();
    let e = epsilon.exp();
    let mut worst = DpCheck {
        worst_excess: f64::NEG_INFINITY,
        worst_bin: 0,
    };
    for (bin, (&a, &b)) in c1.iter().zip(c2).enumerate() {
        let p1 = a as f64 / n1 as f64;
        let p2 = b as f64 / n2 as f64;
        for (pa, pb, na, nb) in [(p1, p2, n1, n2), (p2, p1, n2, n1)] {
            let se = (pa * (1.0 - pa) / na as f64 + e * e * pb * (1.0 - pb) / nb as f64).sqrt();
            let excess = pa - (e * pb + delta + 3.0 * se);
            if excess > worst.worst_excess {
                worst = DpCheck {
                    worst_excess: excess,
                    worst_bin: bin,
                };
            }
        }
    }
    worst
}

/// Runs two scalar mechanisms `runs` times each, bins both outputs into
/// `bins` equal-width bins spanning the central 99% of a pilot sample (tails
/// fall into the end bins) and checks the DP inequality in every bin.
pub fn check_scalar_mechanism(
    mut on_d1: impl FnMut(&mut RandomSource) -> f64,
    mut on_d2: impl FnMut(&mut RandomSource) -> f64,
    epsilon: f64,
    delta: f64,
    runs: usize,
    bins: usize,
    seed: u64,
) -> DpCheck {
    let mut pilot_rng = RandomSource::from_seed(seed ^ 0x9e37_79b9);
    let mut pilot: Vec<f64> = (0..2000)
        .map(|i| {
            if i % 2 == 0 {
                on_d1(&mut pilot_rng)
            } else {
                on_d2(&mut pilot_rng)
            }
        })
        .collect();
    pilot.sort_by(|a, b| a.total_cmp(b));
    let lo = pilot[10];
    let hi = pilot[pilot.len() - 11];
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let bin_of = |v: f64| -> usize {
        let k = ((v - lo) / width).floor();
        if k < 0.0 {
            0
        } else {
            (k as usize).min(bins - 1)
        }
    };
    let mut c1 = vec![0u64; bins];
    let mut c2 = vec![0u64; bins];
    let mut r1 = RandomSource::from_seed(seed);
    let mut r2 = RandomSource::from_seed(seed.wrapping_add(1));
    for _ in 0..runs {
        c1[bin_of(on_d1(&mut r1))] += 1;
        c2[bin_of(on_d2(&mut r2))] += 1;
    }
    check_counts(&c1, &c2, epsilon, delta)
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

/// Smooth margin loss φ, φ′, φ″ used by the oracle solver.
pub type MarginFns = (fn(f64) -> f64, fn(f64) -> f64, fn(f64) -> f64);

pub fn logistic_fns() -> MarginFns {
    fn v(z: f64) -> f64 {
        if z > 0.0 {
            (-z).exp().ln_1p()
        } else {
            -z + z.exp().ln_1p()
        }
    }
    fn d(z: f64) -> f64 {
        -1.0 / (1.0 + z.exp())
    }
    fn dd(z: f64) -> f64 {
        let s = 1.0 / (1.0 + (-z).exp());
        s * (1.0 - s)
    }
    (v, d, dd)
}

/// Huber loss with h = 0.5.
pub fn huber_half_fns() -> MarginFns {
    fn v(z: f64) -> f64 {
        if z > 1.5 {
            0.0
        } else if z < 0.5 {
            1.0 - z
        } else {
            0.5 * (1.5 - z).powi(2)
        }
    }
    fn d(z: f64) -> f64 {
        if z > 1.5 {
            0.0
        } else if z < 0.5 {
            -1.0
        } else {
            -(1.5 - z)
        }
    }
    fn dd(z: f64) -> f64 {
        if (0.5..=1.5).contains(&z) {
            1.0
        } else {
            0.0
        }
    }
    (v, d, dd)
}

/// Minimizes (1/n) Σ wᵢ φ(yᵢ xᵢθ) + (γ/2n)‖θ‖² by damped Newton steps.
pub fn newton_margin_fit(
    x: &Array2<f64>,
    y: &[f64],
    weights: Option<&[f64]>,
    gamma: f64,
    f: MarginFns,
) -> Vec<f64> {
    newton_margin_fit_linear(x, y, weights, gamma, None, f)
}

/// As [`newton_margin_fit`] with an extra linear term bᵀθ/n.
pub fn newton_margin_fit_linear(
    x: &Array2<f64>,
    y: &[f64],
    weights: Option<&[f64]>,
    gamma: f64,
    linear: Option<&[f64]>,
    f: MarginFns,
) -> Vec<f64> {
    let (n, p) = x.dim();
    let nf = n as f64;
    let zeros = vec![0.0; p];
    let lin = linear.unwrap_or(&zeros);
    let objective = |t: &[f64]| -> f64 {
        let mut s = 0.5 * gamma * t.iter().map(|v| v * v).sum::<f64>();
        s += t.iter().zip(lin).map(|(a, c)| a * c).sum::<f64>();
        for i in 0..n {
            let z: f64 = y[i] * (0..p).map(|j| x[[i, j]] * t[j]).sum::<f64>();
            s += weights.map_or(1.0, |w| w[i]) * (f.0)(z);
        }
        s / nf
    };
    let mut theta = vec![0.0; p];
    for _ in 0..500 {
        let mut g: Vec<f64> = theta.iter().zip(lin).map(|(t, c)| gamma * t + c).collect();
        let mut h: Vec<Vec<f64>> = (0..p)
            .map(|j| (0..p).map(|k| if j == k { gamma } else { 0.0 }).collect())
            .collect();
        for i in 0..n {
            let w = weights.map_or(1.0, |w| w[i]);
            let z: f64 = y[i] * (0..p).map(|j| x[[i, j]] * theta[j]).sum::<f64>();
            let d1 = w * (f.1)(z) * y[i];
            let d2 = w * (f.2)(z);
            for j in 0..p {
                g[j] += d1 * x[[i, j]];
                for k in 0..p {
                    h[j][k] += d2 * x[[i, j]] * x[[i, k]];
                }
            }
        }
        let gn: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt() / nf;
        if gn < 1e-13 {
            break;
        }
        let step = solve(&h, &g);
        let f0 = objective(&theta);
        let mut t = 1.0;
        loop {
            let cand: Vec<f64> = theta.iter().zip(&step).map(|(a, s)| a - t * s).collect();
            if objective(&cand) <= f0 || t < 1e-12 {
                theta = cand;
                break;
            }
            t *= 0.5;
        }
    }
    theta
}

/// Minimizes ½θᵀAθ − cᵀθ over ‖θ‖ ≤ r for positive definite A, via the KKT
/// condition (A + μI)θ = c with bisection on μ ≥ 0.
pub fn ball_constrained_quadratic(a: &[Vec<f64>], c: &[f64], r: f64) -> Vec<f64> {
    let shifted = |mu: f64| -> Vec<f64> {
        let m: Vec<Vec<f64>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| if i == j { v + mu } else { *v })
                    .collect()
            })
            .collect();
        solve(&m, c)
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let free = shifted(0.0);
    if norm(&free) <= r {
        return free;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while norm(&shifted(hi)) > r {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if norm(&shifted(mid)) > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    shifted(hi)
}

/// Two-class toy data: class j has x1 = 3t, x2 = m − t with t on an even
/// grid over [−0.25, 0.25] and m ~ N(∓0.2, 0.1²). Labels are 0 and 1.
/// `x2` is clamped to [−1, 1] so every row honors the declared bounds.
pub fn two_class_toy(per_class: usize, rng: &mut RandomSource) -> (Array2<f64>, Vec<f64>) {
    let mut x = Array2::zeros((2 * per_class, 2));
    let mut y = vec![0.0; 2 * per_class];
    for j in 0..2 {
        let centre = if j == 0 { -0.2 } else { 0.2 };
        for i in 0..per_class {
            let t = -0.25 + 0.5 * i as f64 / (per_class - 1) as f64;
            let m = centre + 0.1 * rng.standard_normal();
            let row = j * per_class + i;
            x[[row, 0]] = 3.0 * t;
            x[[row, 1]] = (m - t).clamp(-1.0, 1.0);
            y[row] = j as f64;
        }
    }
    (x, y)
}

/// Every tenth row (starting at the first) goes to the test split.
pub fn tenth_split(x: &Array2<f64>, y: &[f64]) -> (Array2<f64>, Vec<f64>, Array2<f64>, Vec<f64>) {
    let test: Vec<usize> = (0..y.len()).step_by(10).collect();
    let train: Vec<usize> = (0..y.len()).filter(|i| i % 10 != 0).collect();
    let pick = |idx: &[usize]| {
        (
            x.select(ndarray::Axis(0), idx),
            idx.iter().map(|&i| y[i]).collect::<Vec<_>>(),
        )
    };
    let (xtr, ytr) = pick(&train);
    let (xte, yte) = pick(&test);
    (xtr, ytr, xte, yte)
}

/// Central-difference gradient.
pub fn numeric_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            let mut a = x.to_vec();
            let mut b = x.to_vec();
            a[j] += h;
            b[j] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
