//! Low-rank ascent for `max λ₁(P)` over a spectrahedron.
//!
//! The search runs over factors `V` (`n x R`) with `P = V V*`, so positivity
//! and the rank bound hold by construction. Each step moves along the top
//! eigenvector direction `u u* V`, projected onto the tangent space of the
//! constraint manifold; every `restore_every` steps a Gauss–Newton
//! restoration pulls `V` back onto the constraints. The returned objective is
//! attained by a feasible point and is therefore a lower bound on the maximum.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{pick_best, RestartTrace, SolveResult};
use crate::error::{Error, Result};
use crate::instances::{gaussian_matrix, seeded_rng};
use crate::linalg::{eigh, numerical_rank, real_inner, CMatrix, HermitianMatrix, C64, DEFAULT_TOL};
use crate::spectrahedron::{membership, MembershipReport, Spectrahedron};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lambda1Options {
    pub restarts: usize,
    pub max_iters: usize,
    /// `c` in the step length `c / sqrt(t)` (relative to `||V||_F`).
    pub step: f64,
    pub seed: u64,
    pub tol: f64,
    pub restore_every: usize,
    /// Monotone projected-gradient steps after the `c / sqrt(t)` phase.
    pub polish_iters: usize,
    /// Random factors tried per restart before the feasibility phase gives up.
    pub feasibility_attempts: usize,
    /// Optional feasible starting factor used by restart 0.
    #[serde(skip)]
    pub start: Option<CMatrix>,
}

impl Default for Lambda1Options {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 400,
            step: 0.5,
            seed: 0,
            tol: DEFAULT_TOL,
            restore_every: 10,
            polish_iters: 200,
            feasibility_attempts: 20,
            start: None,
        }
    }
}

struct Constraints<'a> {
    c: &'a Spectrahedron,
}

impl Constraints<'_> {
    fn images(&self, v: &CMatrix) -> Vec<CMatrix> {
        self.c.constraints().iter().map(|k| k.a.as_matrix() * v).collect()
    }

    /// `Tr(A_k V V*) - c_k`.
    fn residuals(&self, v: &CMatrix, images: &[CMatrix]) -> DVector<f64> {
        DVector::from_iterator(
            images.len(),
            images.iter().zip(self.c.constraints()).map(|(av, k)| real_inner(v, av) - k.c),
        )
    }

    fn scaled_max(&self, g: &DVector<f64>) -> f64 {
        g.iter().zip(self.c.constraints()).map(|(r, k)| r.abs() / k.scale()).fold(0.0, f64::max)
    }

    fn tangent_gram(images: &[CMatrix]) -> DMatrix<f64> {
        let m = images.len();
        DMatrix::from_fn(m, m, |k, l| real_inner(&images[k], &images[l]))
    }

    /// Coefficients `M^+ b` for the Gram matrix `M` of the constraint gradients.
    fn solve_tangent(images: &[CMatrix], b: &DVector<f64>) -> DVector<f64> {
        let m = Self::tangent_gram(images);
        let scale = m.abs().max();
        if scale == 0.0 {
            return DVector::zeros(b.len());
        }
        let svd = m.svd(true, true);
        svd.solve(b, 1e-12 * scale).unwrap_or_else(|_| DVector::zeros(b.len()))
    }

    /// `u u* V` with its component along the constraint gradients removed.
    fn ascent_direction(&self, v: &CMatrix) -> Result<CMatrix> {
        let (_, u) = lambda1_of(v, self.c.field())?;
        let images = self.images(v);
        let mut d = &u * (u.adjoint() * v);
        let b = DVector::from_iterator(images.len(), images.iter().map(|img| real_inner(img, &d)));
        d -= Self::combine(&images, &Self::solve_tangent(&images, &b), v.shape());
        Ok(d)
    }

    fn combine(images: &[CMatrix], coeffs: &DVector<f64>, shape: (usize, usize)) -> CMatrix {
        let mut out = CMatrix::zeros(shape.0, shape.1);
        for (img, a) in images.iter().zip(coeffs.iter()) {
            out += img * C64::new(*a, 0.0);
        }
        out
    }

    /// Minimum-norm Gauss–Newton steps with backtracking until the scaled
    /// residual is below `target`. Returns `None` if progress stalls.
    fn restore(&self, mut v: CMatrix, target: f64, max_steps: usize) -> Option<CMatrix> {
        let mut images = self.images(&v);
        let mut g = self.residuals(&v, &images);
        let mut err = self.scaled_max(&g);
        for _ in 0..max_steps {
            if err <= target {
                return Some(v);
            }
            let delta = Self::solve_tangent(&images, &(&g * -0.5));
            let step = Self::combine(&images, &delta, v.shape());
            let mut lr = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let cand = &v + &step * C64::new(lr, 0.0);
                let cand_images = self.images(&cand);
                let cand_g = self.residuals(&cand, &cand_images);
                let cand_err = self.scaled_max(&cand_g);
                if cand_err < err {
                    v = cand;
                    images = cand_images;
                    g = cand_g;
                    err = cand_err;
                    accepted = true;
                    break;
                }
                lr *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        (err <= target).then_some(v)
    }
}

fn lambda1_of(v: &CMatrix, field: crate::linalg::Field) -> Result<(f64, DVector<C64>)> {
    let p = HermitianMatrix::gram_of_columns(field, v)?;
    let e = eigh(&p)?;
    Ok((e.eigenvalues[0], e.eigenvectors.column(0).into_owned()))
}

struct RestartOutcome {
    trace: RestartTrace,
    best_v: Option<CMatrix>,
    last_attempt: CMatrix,
}

fn run_restart(c: &Spectrahedron, rank: usize, idx: usize, opts: &Lambda1Options) -> Result<RestartOutcome> {
    let cons = Constraints { c };
    let seed = opts.seed.wrapping_add(idx as u64);
    let mut rng = seeded_rng(seed);
    let n = c.n();
    let target = 1e-2 * opts.tol;
    let mut trace =
        RestartTrace { restart: idx, seed, best: None, iterations: 0, feasible: false, converged: false, objective_trace: vec![] };

    let mut start = None;
    let mut last_attempt = CMatrix::zeros(n, rank);
    if idx == 0 {
        if let Some(v0) = &opts.start {
            if v0.nrows() != n || v0.ncols() > rank {
                return Err(Error::Shape(format!("starting factor must be {n} x (at most {rank})")));
            }
            let mut v = CMatrix::zeros(n, rank);
            v.columns_mut(0, v0.ncols()).copy_from(v0);
            last_attempt = v.clone();
            start = cons.restore(v, target, 100);
        }
    }
    for _ in 0..opts.feasibility_attempts {
        if start.is_some() {
            break;
        }
        let v = gaussian_matrix(n, rank, c.field(), &mut rng) * C64::new(1.0 / ((n * rank) as f64).sqrt(), 0.0);
        last_attempt = v.clone();
        start = cons.restore(v, target, 100);
    }
    let Some(mut v) = start else {
        return Ok(RestartOutcome { trace, best_v: None, last_attempt });
    };
    trace.feasible = true;

    let mut best = lambda1_of(&v, c.field())?.0;
    let mut best_v = v.clone();
    trace.objective_trace.push(best);
    let mut damping = 1.0;
    let mut quiet_blocks = 0;
    let mut block_start = best;
    let every = opts.restore_every.max(1);

    for t in 1..=opts.max_iters {
        trace.iterations = t;
        let d = cons.ascent_direction(&v)?;
        let (dn, vn) = (d.norm(), v.norm());
        if dn <= 1e-12 * vn.max(1e-300) {
            trace.converged = true;
            break;
        }
        let eta = opts.step * damping / (t as f64).sqrt() * vn / dn;
        v += &d * C64::new(eta, 0.0);

        if t % every == 0 || t == opts.max_iters {
            match cons.restore(v.clone(), target, 50) {
                Some(restored) => {
                    v = restored;
                    let f = lambda1_of(&v, c.field())?.0;
                    trace.objective_trace.push(f);
                    if f > best {
                        best = f;
                        best_v = v.clone();
                    } else {
                        v = best_v.clone();
                        damping *= 0.5;
                    }
                }
                None => {
                    v = best_v.clone();
                    damping *= 0.5;
                }
            }
            if best - block_start <= opts.tol * (1.0 + best.abs()) {
                quiet_blocks += 1;
            } else {
                quiet_blocks = 0;
            }
            block_start = best;
            if quiet_blocks >= 3 {
                trace.converged = true;
                break;
            }
        }
    }
    // The c/sqrt(t) phase only gets close; finish with monotone projected
    // gradient steps, each followed by a restoration.
    let mut v = best_v.clone();
    let mut s = 1.0;
    let mut polish_converged = false;
    for _ in 0..opts.polish_iters {
        let d = cons.ascent_direction(&v)?;
        if d.norm() <= 1e-12 * v.norm() || s < 1e-12 {
            polish_converged = true;
            break;
        }
        let accepted = cons
            .restore(&v + &d * C64::new(s, 0.0), target, 50)
            .map(|cand| -> Result<_> { Ok((lambda1_of(&cand, c.field())?.0, cand)) })
            .transpose()?
            .filter(|(f, _)| *f > best);
        match accepted {
            Some((f, cand)) => {
                let gain = f - best;
                best = f;
                v = cand;
                s *= 2.0;
                if gain <= 1e-14 * (1.0 + best.abs()) {
                    polish_converged = true;
                    break;
                }
            }
            None => s *= 0.5,
        }
    }
    trace.objective_trace.push(best);
    let best_v = v;
    trace.converged = trace.converged || polish_converged;
    trace.best = Some(best);
    Ok(RestartOutcome { trace, best_v: Some(best_v), last_attempt })
}

/// Maximize `λ₁(P)` over points of `c` with rank at most `rank_bound`.
pub fn max_lambda1_lowrank(c: &Spectrahedron, rank_bound: usize, opts: &Lambda1Options) -> Result<SolveResult> {
    if rank_bound == 0 {
        return Err(Error::Domain("rank bound must be at least 1".into()));
    }
    if opts.restarts == 0 {
        return Err(Error::Domain("at least one restart is required".into()));
    }
    if c.n() == 0 {
        return Err(Error::Domain("empty spectrahedron dimension".into()));
    }
    let rank = rank_bound.min(c.n());
    let outcomes: Vec<RestartOutcome> =
        (0..opts.restarts).into_par_iter().map(|i| run_restart(c, rank, i, opts)).collect::<Result<_>>()?;
    let bests: Vec<Option<f64>> = outcomes.iter().map(|o| o.trace.best).collect();
    let Some(winner) = pick_best(&bests, true) else {
        let p = HermitianMatrix::gram_of_columns(c.field(), &outcomes[0].last_attempt)?;
        let report: MembershipReport = membership(c, &p, opts.tol)?;
        return Err(Error::Infeasible(Box::new(report)));
    };
    let v = outcomes[winner].best_v.as_ref().expect("feasible restart keeps its factor");
    let p_opt = HermitianMatrix::gram_of_columns(c.field(), v)?;
    let objective = eigh(&p_opt)?.max_eigenvalue();
    let report = membership(c, &p_opt, opts.tol)?;
    Ok(SolveResult {
        rank: numerical_rank(&p_opt, None)?.rank,
        p_opt,
        objective,
        rank_bound_used: rank,
        restarts: opts.restarts,
        best_restart: winner,
        converged: outcomes[winner].trace.converged && report.feasible,
        traces: outcomes.into_iter().map(|o| o.trace).collect(),
        membership: report,
        bound: "lower_bound".into(),
    })
}
