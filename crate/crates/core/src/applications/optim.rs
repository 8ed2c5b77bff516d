//! Limited-memory BFGS with a bounded Armijo backtracking search.
//!
//! Every loop is capped and non-finite trial points are rejected, so a call
//! always returns a point no worse than its start.

use std::collections::VecDeque;

use nalgebra::DVector;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LbfgsOptions {
    pub max_iters: usize,
    pub memory: usize,
    /// Stop once `||grad||_inf` drops below this.
    pub grad_tol: f64,
    pub max_backtracks: usize,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self { max_iters: 300, memory: 10, grad_tol: 1e-12, max_backtracks: 60 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LbfgsOutcome {
    pub x: DVector<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize `f` given `fg(x) = (f(x), grad f(x))`.
pub fn lbfgs(fg: impl Fn(&DVector<f64>) -> (f64, DVector<f64>), x0: DVector<f64>, opts: &LbfgsOptions) -> LbfgsOutcome {
    let (mut f, mut g) = fg(&x0);
    let mut x = x0;
    let mut hist: VecDeque<(DVector<f64>, DVector<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut iterations = 0;
    let mut converged = false;
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return LbfgsOutcome { x, cost: f, iterations, converged };
    }
    while iterations < opts.max_iters {
        if g.amax() <= opts.grad_tol {
            converged = true;
            break;
        }
        iterations += 1;
        // Two-loop recursion.
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * s.dot(&q);
            q.axpy(-a, y, 1.0);
            alphas.push(a);
        }
        if let Some((s, y, _)) = hist.back() {
            q *= s.dot(y) / y.dot(y);
        }
        for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
            let b = rho * y.dot(&q);
            q.axpy(a - b, s, 1.0);
        }
        let mut d = -q;
        let mut slope = g.dot(&d);
        if !(slope < 0.0) {
            hist.clear();
            d = -g.clone();
            slope = -g.norm_squared();
        }
        let mut step = if hist.is_empty() { 1.0 / g.norm().max(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..opts.max_backtracks {
            let cand = &x + &d * step;
            let (fc, gc) = fg(&cand);
            if fc.is_finite() && gc.iter().all(|v| v.is_finite()) && fc <= f + 1e-4 * step * slope {
                accepted = Some((cand, fc, gc));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else { break };
        let s = &xn - &x;
        let y = &gn - &g;
        let sy = s.dot(&y);
        if sy > 1e-16 * s.norm() * y.norm() && sy > 0.0 {
            if hist.len() == opts.memory {
                hist.pop_front();
            }
            hist.push_back((s, y, 1.0 / sy));
        }
        let stalled = f - fn_ <= f64::EPSILON * f.abs().max(1e-300) && fn_ <= f;
        x = xn;
        f = fn_;
        g = gn;
        if stalled && hist.is_empty() {
            break;
        }
    }
    LbfgsOutcome { x, cost: f, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let fg = |x: &DVector<f64>| {
            let (a, b) = (x[0], x[1]);
            let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = DVector::from_vec(vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)]);
            (f, g)
        };
        let out = lbfgs(fg, DVector::from_vec(vec![-1.2, 1.0]), &LbfgsOptions { max_iters: 500, ..Default::default() });
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6, "{:?}", out);
    }

    #[test]
    fn never_worse_than_start() {
        let fg = |x: &DVector<f64>| (if x[0] > 0.5 { f64::NAN } else { -x[0] }, DVector::from_vec(vec![-1.0]));
        let out = lbfgs(fg, DVector::from_vec(vec![0.0]), &LbfgsOptions::default());
        assert!(out.cost <= 0.0 && out.cost.is_finite());
    }
}
