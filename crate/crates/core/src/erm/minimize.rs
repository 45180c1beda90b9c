use std::collections::VecDeque;

use crate::{DpError, Result};

/// A smooth function to minimize.
pub trait Objective {
    fn dim(&self) -> usize;
    /// Returns f(x) and writes ∇f(x) into `grad`.
    fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64;
}

/// Feasible set of the minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Unconstrained,
    /// Closed Euclidean ball of the given radius centered at the origin.
    Ball { radius: f64 },
}

impl Domain {
    fn project(&self, x: &mut [f64]) {
        if let Domain::Ball { radius } = *self {
            let n = norm(x);
            if n > radius {
                let s = radius / n;
                x.iter_mut().for_each(|v| *v *= s);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Stop once the (projected) gradient norm falls to this level.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Norm of the gradient (projected gradient on a ball) at `x`.
    pub gradient_norm: f64,
    /// False when the iteration cap was hit before the tolerance.
    pub converged: bool,
}

/// Minimizes a smooth convex objective from `x0`.
///
/// Unconstrained problems use L-BFGS with a backtracking line search; ball
/// constraints use spectral projected gradient with a nonmonotone search.
/// Hitting the iteration cap is not an error: the result reports
/// `converged = false`.
pub fn minimize(
    objective: &dyn Objective,
    x0: &[f64],
    domain: Domain,
    options: MinimizeOptions,
) -> Result<Minimum> {
    if x0.len() != objective.dim() {
        return Err(DpError::dims(format!(
            "start point has {} coordinates, objective expects {}",
            x0.len(),
            objective.dim()
        )));
    }
    if let Domain::Ball { radius } = domain {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(DpError::input(format!("ball radius must be positive, got {radius}")));
        }
    }
    let mut x = x0.to_vec();
    domain.project(&mut x);
    let mut g = vec![0.0; x.len()];
    let f = objective.value_grad(&x, &mut g);
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(DpError::Optimization(
            "objective is not finite at the starting point".into(),
        ));
    }
    match domain {
        Domain::Unconstrained => lbfgs(objective, x, f, g, options),
        Domain::Ball { .. } => spg(objective, domain, x, f, g, options),
    }
}

const MEMORY: usize = 10;
const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

// Armijo test with a small allowance for rounding once the decrease falls
// below machine resolution of f.
fn sufficient_decrease(f_new: f64, f: f64, step_slope: f64) -> bool {
    f_new <= f + ARMIJO * step_slope + 4.0 * f64::EPSILON * f.abs()
}

fn lbfgs(
    obj: &dyn Objective,
    mut x: Vec<f64>,
    mut f: f64,
    mut g: Vec<f64>,
    opts: MinimizeOptions,
) -> Result<Minimum> {
    let n = x.len();
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(MEMORY);
    let mut d = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut iterations = 0;
    let mut gnorm = norm(&g);

    while gnorm > opts.tolerance && iterations < opts.max_iterations {
        iterations += 1;
        two_loop(&g, &history, &mut d);
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            history.clear();
            d.iter_mut().zip(&g).for_each(|(di, gi)| *di = -gi);
            slope = -gnorm * gnorm;
        }
        let mut t = if history.is_empty() {
            (1.0 / gnorm).min(1.0)
        } else {
            1.0
        };

        let mut accepted = false;
        let mut f_new = f;
        for _ in 0..MAX_BACKTRACKS {
            for i in 0..n {
                x_new[i] = x[i] + t * d[i];
            }
            f_new = obj.value_grad(&x_new, &mut g_new);
            if f_new.is_finite() && sufficient_decrease(f_new, f, t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            if history.is_empty() {
                // Steepest descent made no progress: at machine precision.
                break;
            }
            history.clear();
            continue;
        }

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) && sy > 0.0 {
            if history.len() == MEMORY {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        f = f_new;
        gnorm = norm(&g);
    }

    Ok(Minimum {
        x,
        value: f,
        iterations,
        gradient_norm: gnorm,
        converged: gnorm <= opts.tolerance,
    })
}

fn two_loop(g: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>, d: &mut [f64]) {
    d.copy_from_slice(g);
    let mut alphas = vec![0.0; history.len()];
    for (k, (s, y, rho)) in history.iter().enumerate().rev() {
        let a = rho * dot(s, d);
        alphas[k] = a;
        d.iter_mut().zip(y).for_each(|(di, yi)| *di -= a * yi);
    }
    if let Some((s, y, _)) = history.back() {
        let scale = dot(s, y) / dot(y, y);
        d.iter_mut().for_each(|v| *v *= scale);
    }
    for (k, (s, y, rho)) in history.iter().enumerate() {
        let b = rho * dot(y, d);
        let a = alphas[k];
        d.iter_mut().zip(s).for_each(|(di, si)| *di += (a - b) * si);
    }
    d.iter_mut().for_each(|v| *v = -*v);
}

const NONMONOTONE_WINDOW: usize = 10;

fn projected_gradient_norm(domain: Domain, x: &[f64], g: &[f64]) -> f64 {
    let mut p: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
    domain.project(&mut p);
    p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

fn spg(
    obj: &dyn Objective,
    domain: Domain,
    mut x: Vec<f64>,
    mut f: f64,
    mut g: Vec<f64>,
    opts: MinimizeOptions,
) -> Result<Minimum> {
    let n = x.len();
    let mut recent: VecDeque<f64> = VecDeque::with_capacity(NONMONOTONE_WINDOW);
    recent.push_back(f);
    let mut alpha = {
        let gn = norm(&g);
        if gn > 0.0 {
            (1.0 / gn).min(1.0)
        } else {
            1.0
        }
    };
    let mut x_new = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut iterations = 0;
    let mut pgn = projected_gradient_norm(domain, &x, &g);

    while pgn > opts.tolerance && iterations < opts.max_iterations {
        iterations += 1;
        for i in 0..n {
            d[i] = x[i] - alpha * g[i];
        }
        domain.project(&mut d);
        for i in 0..n {
            d[i] -= x[i];
        }
        let slope = dot(&g, &d);
        let f_ref = recent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

        let mut lambda = 1.0;
        let mut accepted = false;
        let mut f_new = f;
        for _ in 0..MAX_BACKTRACKS {
            for i in 0..n {
                x_new[i] = x[i] + lambda * d[i];
            }
            f_new = obj.value_grad(&x_new, &mut g_new);
            if f_new.is_finite() && sufficient_decrease(f_new, f_ref, lambda * slope) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }

        let mut sy = 0.0;
        let mut ss = 0.0;
        for i in 0..n {
            let s = x_new[i] - x[i];
            let y = g_new[i] - g[i];
            sy += s * y;
            ss += s * s;
        }
        alpha = if sy > 0.0 { (ss / sy).clamp(1e-12, 1e12) } else { 1e12 };
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        f = f_new;
        if recent.len() == NONMONOTONE_WINDOW {
            recent.pop_front();
        }
        recent.push_back(f);
        pgn = projected_gradient_norm(domain, &x, &g);
    }

    Ok(Minimum {
        x,
        value: f,
        iterations,
        gradient_norm: pgn,
        converged: pgn <= opts.tolerance,
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    // f(x) = ½ Σ cᵢ (xᵢ − aᵢ)²
    struct Quadratic {
        c: Vec<f64>,
        a: Vec<f64>,
    }

    impl Objective for Quadratic {
        fn dim(&self) -> usize {
            self.c.len()
        }
        fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
            let mut f = 0.0;
            for i in 0..x.len() {
                let r = x[i] - self.a[i];
                f += 0.5 * self.c[i] * r * r;
                grad[i] = self.c[i] * r;
            }
            f
        }
    }

    struct Rosenbrock;

    impl Objective for Rosenbrock {
        fn dim(&self) -> usize {
            2
        }
        fn value_grad(&self, x: &[f64], g: &mut [f64]) -> f64 {
            let (a, b) = (x[0], x[1]);
            g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
            g[1] = 200.0 * (b - a * a);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        }
    }

    #[test]
    fn ill_conditioned_quadratic() {
        let q = Quadratic {
            c: vec![1e-3, 1.0, 1e3],
            a: vec![3.0, -2.0, 0.5],
        };
        let m = minimize(&q, &[0.0; 3], Domain::Unconstrained, MinimizeOptions::default()).unwrap();
        assert!(m.converged);
        for (x, a) in m.x.iter().zip(&q.a) {
            assert!((x - a).abs() < 1e-4);
        }
    }

    #[test]
    fn rosenbrock_converges() {
        let m = minimize(&Rosenbrock, &[-1.2, 1.0], Domain::Unconstrained, MinimizeOptions::default())
            .unwrap();
        assert!(m.converged, "{m:?}");
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ball_constraint_lands_on_boundary() {
        // Unconstrained minimizer (3, 4) has norm 5; on the unit ball the
        // answer is its radial projection.
        let q = Quadratic {
            c: vec![1.0, 1.0],
            a: vec![3.0, 4.0],
        };
        let m = minimize(&q, &[0.0, 0.0], Domain::Ball { radius: 1.0 }, MinimizeOptions::default())
            .unwrap();
        assert!(m.converged);
        assert!((m.x[0] - 0.6).abs() < 1e-8 && (m.x[1] - 0.8).abs() < 1e-8);
    }

    #[test]
    fn interior_optimum_on_ball() {
        let q = Quadratic {
            c: vec![2.0, 0.5],
            a: vec![0.1, -0.2],
        };
        let m = minimize(&q, &[0.9, 0.0], Domain::Ball { radius: 1.0 }, MinimizeOptions::default())
            .unwrap();
        assert!((m.x[0] - 0.1).abs() < 1e-8 && (m.x[1] + 0.2).abs() < 1e-8);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let opts = MinimizeOptions {
            tolerance: 1e-12,
            max_iterations: 2,
        };
        let m = minimize(&Rosenbrock, &[-1.2, 1.0], Domain::Unconstrained, opts).unwrap();
        assert!(!m.converged);
        assert_eq!(m.iterations, 2);
    }

    #[test]
    fn rejects_non_finite_start() {
        struct Bad;
        impl Objective for Bad {
            fn dim(&self) -> usize {
                1
            }
            fn value_grad(&self, _: &[f64], g: &mut [f64]) -> f64 {
                g[0] = 0.0;
                f64::NAN
            }
        }
        assert!(matches!(
            minimize(&Bad, &[0.0], Domain::Unconstrained, MinimizeOptions::default()),
            Err(DpError::Optimization(_))
        ));
    }
}
