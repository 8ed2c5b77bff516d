//! Entropy minimization over rank-2 states `P = α ψψ* + (1 - α) φφ*` on
//! `L²[0,1]` subject to the position moments `∫ u^j <P>(u) du = m_j`, `j = 1, 2, 3`.
//!
//! The state lives in the orthonormal shifted-Legendre basis of size `m`.
//! With `α = cos²θ` the problem is unconstrained in `(θ, ψ, φ)` apart from
//! the moment and orthonormality residuals, which enter as a quadratic
//! penalty whose weight doubles every outer round. Each round is an L-BFGS
//! solve; a Gauss–Newton polish on the residuals finishes the run.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::galerkin::galerkin_moment_operators;
use super::optim::{lbfgs, LbfgsOptions};
use super::{pick_best, RestartTrace, SolveResult};
use crate::error::{Error, Result};
use crate::instances::seeded_rng;
use crate::linalg::{eigh, numerical_rank, CMatrix, CVector, Field, HermitianMatrix, C64, DEFAULT_TOL};
use crate::spectrahedron::{membership, Constraint, Spectrahedron};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyOptions {
    pub restarts: usize,
    pub seed: u64,
    pub outer_rounds: usize,
    pub penalty0: f64,
    pub inner_iters: usize,
    /// Feasibility tolerance on the moment and normalization residuals.
    pub tol: f64,
    /// Fix `α = 1`, i.e. search over pure states only.
    pub rank_one: bool,
    pub field: Field,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            seed: 0,
            outer_rounds: 8,
            penalty0: 10.0,
            inner_iters: 300,
            tol: DEFAULT_TOL,
            rank_one: false,
            field: Field::Complex,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    pub solve: SolveResult,
    pub alpha: f64,
    /// Coefficients in the shifted-Legendre basis as `[re, im]` pairs.
    pub psi: Vec<[f64; 2]>,
    pub phi: Vec<[f64; 2]>,
    /// `h(α) = -α log α - (1 - α) log(1 - α)`.
    pub entropy: f64,
    /// `-Tr(P log P)` from the eigenvalues of the returned `P`.
    pub von_neumann_entropy: f64,
    /// Moment residuals `Tr(M_j P) - m_j`, `j = 1, 2, 3`.
    pub moment_residuals: [f64; 3],
    /// Largest absolute residual including normalization and orthogonality of `ψ, φ`.
    pub max_residual: f64,
}

/// Binary entropy with `0 log 0 = 0`.
pub fn binary_entropy(alpha: f64) -> f64 {
    let xlogx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    0.0 - (xlogx(alpha) + xlogx(1.0 - alpha))
}

/// `d/dθ h(cos²θ)`; bounded although `h'` blows up at the ends.
fn entropy_dtheta(theta: f64) -> f64 {
    let alpha = theta.cos().powi(2);
    if alpha <= 0.0 || alpha >= 1.0 {
        return 0.0;
    }
    ((1.0 - alpha) / alpha).ln() * -(2.0 * theta).sin()
}

#[derive(Clone)]
struct Model {
    ops: Vec<DMatrix<f64>>,
    targets: [f64; 3],
    m: usize,
    complex: bool,
    rank_one: bool,
}

/// Unpacked view of the parameter vector.
struct Point {
    theta: f64,
    a: DVector<f64>,
    b: DVector<f64>,
    c: DVector<f64>,
    d: DVector<f64>,
}

impl Model {
    fn parts(&self) -> usize {
        (if self.complex { 2 } else { 1 }) * (if self.rank_one { 1 } else { 2 })
    }

    fn dim(&self) -> usize {
        1 + self.parts() * self.m
    }

    fn n_residuals(&self) -> usize {
        match (self.rank_one, self.complex) {
            (true, _) => 4,
            (false, false) => 6,
            (false, true) => 7,
        }
    }

    /// Offsets of `a, b, c, d` (real/imaginary parts of ψ and φ) in `x`.
    fn offsets(&self) -> [Option<usize>; 4] {
        let m = self.m;
        let mut next = 1;
        let mut take = |on: bool| {
            on.then(|| {
                let o = next;
                next += m;
                o
            })
        };
        let a = take(true);
        let b = take(self.complex);
        let c = take(!self.rank_one);
        let d = take(!self.rank_one && self.complex);
        [a, b, c, d]
    }

    fn unpack(&self, x: &[f64]) -> Point {
        let m = self.m;
        let get = |o: Option<usize>| match o {
            Some(o) => DVector::from_column_slice(&x[o..o + m]),
            None => DVector::zeros(m),
        };
        let [a, b, c, d] = self.offsets();
        Point { theta: if self.rank_one { 0.0 } else { x[0] }, a: get(a), b: get(b), c: get(c), d: get(d) }
    }

    fn alpha(&self, theta: f64) -> f64 {
        if self.rank_one {
            1.0
        } else {
            theta.cos().powi(2)
        }
    }

    fn residuals(&self, x: &[f64]) -> DVector<f64> {
        let p = self.unpack(x);
        let alpha = self.alpha(p.theta);
        let mut r = DVector::zeros(self.n_residuals());
        for j in 0..3 {
            let mj = &self.ops[j];
            let qpsi = p.a.dot(&(mj * &p.a)) + p.b.dot(&(mj * &p.b));
            let qphi = p.c.dot(&(mj * &p.c)) + p.d.dot(&(mj * &p.d));
            r[j] = alpha * qpsi + (1.0 - alpha) * qphi - self.targets[j];
        }
        r[3] = p.a.norm_squared() + p.b.norm_squared() - 1.0;
        if !self.rank_one {
            r[4] = p.c.norm_squared() + p.d.norm_squared() - 1.0;
            r[5] = p.a.dot(&p.c) + p.b.dot(&p.d);
            if self.complex {
                r[6] = p.a.dot(&p.d) - p.b.dot(&p.c);
            }
        }
        r
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let p = self.unpack(x);
        let alpha = self.alpha(p.theta);
        let dalpha = if self.rank_one { 0.0 } else { -(2.0 * p.theta).sin() };
        let mut jac = DMatrix::zeros(self.n_residuals(), self.dim());
        let [oa, ob, oc, od] = self.offsets();
        let mut put = |row: usize, off: Option<usize>, v: &DVector<f64>| {
            if let Some(o) = off {
                for (i, val) in v.iter().enumerate() {
                    jac[(row, o + i)] += val;
                }
            }
        };
        for j in 0..3 {
            let mj = &self.ops[j];
            let (ma, mb, mc, md) = (mj * &p.a, mj * &p.b, mj * &p.c, mj * &p.d);
            put(j, oa, &(&ma * (2.0 * alpha)));
            put(j, ob, &(&mb * (2.0 * alpha)));
            put(j, oc, &(&mc * (2.0 * (1.0 - alpha))));
            put(j, od, &(&md * (2.0 * (1.0 - alpha))));
        }
        put(3, oa, &(&p.a * 2.0));
        put(3, ob, &(&p.b * 2.0));
        if !self.rank_one {
            put(4, oc, &(&p.c * 2.0));
            put(4, od, &(&p.d * 2.0));
            put(5, oa, &p.c);
            put(5, ob, &p.d);
            put(5, oc, &p.a);
            put(5, od, &p.b);
            if self.complex {
                put(6, oa, &p.d);
                put(6, ob, &(-&p.c));
                put(6, oc, &(-&p.b));
                put(6, od, &p.a);
            }
        }
        if !self.rank_one {
            for j in 0..3 {
                let mj = &self.ops[j];
                let qpsi = p.a.dot(&(mj * &p.a)) + p.b.dot(&(mj * &p.b));
                let qphi = p.c.dot(&(mj * &p.c)) + p.d.dot(&(mj * &p.d));
                jac[(j, 0)] = dalpha * (qpsi - qphi);
            }
        }
        jac
    }

    fn state(&self, x: &[f64]) -> (f64, CVector, CVector) {
        let p = self.unpack(x);
        let psi = CVector::from_fn(self.m, |i, _| C64::new(p.a[i], p.b[i]));
        let phi = CVector::from_fn(self.m, |i, _| C64::new(p.c[i], p.d[i]));
        (self.alpha(p.theta), psi, phi)
    }

    /// Gauss–Newton on the residuals with minimum-norm steps.
    fn polish(&self, mut x: Vec<f64>, steps: usize) -> Vec<f64> {
        let mut r = self.residuals(&x);
        for _ in 0..steps {
            let err = r.amax();
            if err <= 1e-15 {
                break;
            }
            let jac = self.jacobian(&x);
            let scale = jac.abs().max().max(1e-300);
            let Ok(step) = jac.svd(true, true).solve(&(-&r), 1e-13 * scale) else { break };
            let mut lr = 1.0;
            let mut moved = false;
            for _ in 0..30 {
                let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi + lr * si).collect();
                let cr = self.residuals(&cand);
                if cr.amax() < err {
                    x = cand;
                    r = cr;
                    moved = true;
                    break;
                }
                lr *= 0.5;
            }
            if !moved {
                break;
            }
        }
        x
    }
}

struct Penalized<'a> {
    model: &'a Model,
    mu: f64,
}

impl Penalized<'_> {
    fn cost(&self, x: &[f64]) -> f64 {
        binary_entropy(self.model.alpha(x[0])) + self.mu * self.model.residuals(x).norm_squared()
    }

    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        let r = self.model.residuals(x);
        let mut g = self.model.jacobian(x).transpose() * r * (2.0 * self.mu);
        if !self.model.rank_one {
            g[0] += entropy_dtheta(x[0]);
        }
        g
    }
}

fn lbfgs_round(model: &Model, x0: Vec<f64>, mu: f64, iters: usize) -> Vec<f64> {
    let problem = Penalized { model, mu };
    let fg = |x: &DVector<f64>| (problem.cost(x.as_slice()), problem.gradient(x.as_slice()));
    let opts = LbfgsOptions { max_iters: iters, ..Default::default() };
    lbfgs(fg, DVector::from_vec(x0), &opts).x.as_slice().to_vec()
}

fn random_start(model: &Model, rng: &mut impl Rng) -> Vec<f64> {
    let mut x: Vec<f64> = (0..model.dim()).map(|_| rng.sample(StandardNormal)).collect();
    x[0] = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
    // Normalize ψ, then make φ orthonormal to it (complex Gram–Schmidt).
    let (_, psi, phi) = model.state(&x);
    let psi = &psi / C64::new(psi.norm(), 0.0);
    let phi = &phi - &psi * psi.dotc(&phi);
    let phi = &phi / C64::new(phi.norm().max(1e-300), 0.0);
    let [oa, ob, oc, od] = model.offsets();
    for i in 0..model.m {
        let mut set = |o: Option<usize>, v: f64| {
            if let Some(o) = o {
                x[o + i] = v;
            }
        };
        set(oa, psi[i].re);
        set(ob, psi[i].im);
        set(oc, phi[i].re);
        set(od, phi[i].im);
    }
    x
}

struct Run {
    x: Vec<f64>,
    max_residual: f64,
    entropy: f64,
    trace: RestartTrace,
}

fn run_restart(model: &Model, idx: usize, opts: &EntropyOptions) -> Run {
    let seed = opts.seed.wrapping_add(idx as u64);
    let mut rng = seeded_rng(seed);
    let mut x = random_start(model, &mut rng);
    let mut mu = opts.penalty0;
    let mut objective_trace = Vec::with_capacity(opts.outer_rounds);
    for _ in 0..opts.outer_rounds {
        x = lbfgs_round(model, x, mu, opts.inner_iters);
        objective_trace.push(binary_entropy(model.alpha(x[0])));
        mu *= 2.0;
    }
    x = model.polish(x, 60);
    let max_residual = model.residuals(&x).amax();
    let entropy = binary_entropy(model.alpha(x[0]));
    let feasible = max_residual <= opts.tol;
    let trace = RestartTrace {
        restart: idx,
        seed,
        best: feasible.then_some(entropy),
        iterations: opts.outer_rounds,
        feasible,
        converged: feasible,
        objective_trace,
    };
    Run { x, max_residual, entropy, trace }
}

fn von_neumann(p: &HermitianMatrix) -> Result<f64> {
    let e = eigh(p)?;
    Ok(e.eigenvalues.iter().filter(|l| **l > 0.0).map(|l| -l * l.ln()).sum())
}

fn pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// Moment spectrahedron `{Tr P = 1, Tr(M_j P) = m_j}` in the basis of size `m`.
pub fn moment_spectrahedron(moments: [f64; 3], m: usize, field: Field) -> Result<Spectrahedron> {
    let ops = galerkin_moment_operators(m, &[0, 1, 2, 3])?;
    let targets = [1.0, moments[0], moments[1], moments[2]];
    let labels = ["trace", "m1", "m2", "m3"];
    let constraints = ops
        .into_iter()
        .zip(targets)
        .zip(labels)
        .map(|((a, c), l)| Ok(Constraint { label: Some(l.into()), a: a.with_field(field)?, c }))
        .collect::<Result<Vec<_>>>()?;
    Spectrahedron::new(field, m, constraints)
}

/// Minimize the entropy of `α ψψ* + (1 - α) φφ*` subject to three position moments.
pub fn min_entropy_rank2(moments: [f64; 3], m: usize, opts: &EntropyOptions) -> Result<EntropyResult> {
    if m < 2 {
        return Err(Error::Domain("basis size must be at least 2".into()));
    }
    if opts.restarts == 0 {
        return Err(Error::Domain("at least one restart is required".into()));
    }
    if moments.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("moments must be finite".into()));
    }
    let ops: Vec<DMatrix<f64>> =
        galerkin_moment_operators(m, &[1, 2, 3])?.iter().map(HermitianMatrix::real_part).collect();
    let model = Model { ops, targets: moments, m, complex: opts.field == Field::Complex, rank_one: opts.rank_one };

    let runs: Vec<Run> = (0..opts.restarts).into_par_iter().map(|i| run_restart(&model, i, opts)).collect();
    let feasible: Vec<Option<f64>> = runs.iter().map(|r| r.trace.best).collect();
    let winner = pick_best(&feasible, false).unwrap_or_else(|| {
        let residuals: Vec<Option<f64>> = runs.iter().map(|r| Some(r.max_residual)).collect();
        pick_best(&residuals, false).expect("at least one restart")
    });
    let run = &runs[winner];
    let (alpha, psi, phi) = model.state(&run.x);
    let mut acc: CMatrix = &psi * psi.adjoint() * C64::new(alpha, 0.0);
    if !opts.rank_one {
        acc += &phi * phi.adjoint() * C64::new(1.0 - alpha, 0.0);
    }
    let p = HermitianMatrix::new(opts.field, acc)?;
    let c = moment_spectrahedron(moments, m, opts.field)?;
    let report = membership(&c, &p, opts.tol)?;
    let r = model.residuals(&run.x);
    let solve = SolveResult {
        rank: numerical_rank(&p, None)?.rank,
        objective: run.entropy,
        rank_bound_used: if opts.rank_one { 1 } else { 2 },
        restarts: opts.restarts,
        best_restart: winner,
        converged: run.trace.feasible && report.feasible,
        traces: runs.iter().map(|r| r.trace.clone()).collect(),
        membership: report,
        bound: "upper_bound".into(),
        p_opt: p.clone(),
    };
    Ok(EntropyResult {
        von_neumann_entropy: von_neumann(&p)?,
        solve,
        alpha,
        psi: pairs(&psi),
        phi: if opts.rank_one { vec![] } else { pairs(&phi) },
        entropy: run.entropy,
        moment_residuals: [r[0], r[1], r[2]],
        max_residual: run.max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5), 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        for (complex, rank_one) in [(true, false), (false, false), (true, true)] {
            let ops = galerkin_moment_operators(4, &[1, 2, 3]).unwrap().iter().map(HermitianMatrix::real_part).collect();
            let model = Model { ops, targets: [0.5, 0.3, 0.2], m: 4, complex, rank_one };
            let mut rng = seeded_rng(3);
            let x: Vec<f64> = (0..model.dim()).map(|_| rng.sample(StandardNormal)).collect();
            let jac = model.jacobian(&x);
            let h = 1e-6;
            for k in 0..model.dim() {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[k] += h;
                xm[k] -= h;
                let fd = (model.residuals(&xp) - model.residuals(&xm)) / (2.0 * h);
                for i in 0..model.n_residuals() {
                    assert_abs_diff_eq!(jac[(i, k)], fd[i], epsilon = 1e-6);
                }
            }
            let pen = Penalized { model: &model, mu: 3.0 };
            let g = pen.gradient(&x);
            for k in 0..model.dim() {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[k] += h;
                xm[k] -= h;
                let fd = (pen.cost(&xp) - pen.cost(&xm)) / (2.0 * h);
                assert_abs_diff_eq!(g[k], fd, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn uniform_moments_give_a_pure_state() {
        let opts = EntropyOptions { restarts: 4, ..Default::default() };
        let res = min_entropy_rank2([0.5, 1.0 / 3.0, 0.25], 6, &opts).unwrap();
        assert!(res.entropy <= 1e-4, "{}", res.entropy);
        assert!(res.max_residual <= 1e-6);
        assert!(res.solve.membership.feasible);
        assert!(res.solve.rank <= 2);
        assert_abs_diff_eq!(res.solve.p_opt.trace(), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(res.von_neumann_entropy, res.entropy, epsilon = 1e-6);
    }

    #[test]
    fn rank_one_ansatz_has_zero_entropy() {
        let opts = EntropyOptions { restarts: 2, rank_one: true, field: Field::Real, ..Default::default() };
        let res = min_entropy_rank2([0.5, 1.0 / 3.0, 0.25], 4, &opts).unwrap();
        assert_eq!(res.entropy, 0.0);
        assert_eq!(res.alpha, 1.0);
        assert!(res.solve.converged);
        assert_eq!(res.solve.rank, 1);
    }

    #[test]
    fn unattainable_moments_are_flagged() {
        // m2 < m1^2 is impossible for a probability density.
        let opts = EntropyOptions { restarts: 2, outer_rounds: 3, ..Default::default() };
        let res = min_entropy_rank2([0.5, 0.1, 0.05], 4, &opts).unwrap();
        assert!(!res.solve.converged);
        assert!(res.max_residual > opts.tol);
    }

    #[test]
    fn parameter_checks() {
        assert!(min_entropy_rank2([0.5, 0.3, 0.2], 1, &EntropyOptions::default()).is_err());
    }
}
