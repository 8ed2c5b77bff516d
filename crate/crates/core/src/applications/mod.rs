//! Desk-scale versions of the two applied studies: interval-cover PCA
//! constraints with a low-rank `λ₁` maximizer, and moment-constrained quantum
//! states with a rank-2 entropy minimizer.

pub mod entropy;
pub mod galerkin;
pub mod lambda1;
pub mod optim;
pub mod pca;

use serde::{Deserialize, Serialize};

use crate::linalg::HermitianMatrix;
use crate::spectrahedron::MembershipReport;

pub use entropy::{min_entropy_rank2, EntropyOptions, EntropyResult};
pub use galerkin::{galerkin_moment_operators, BasisKind, GalerkinBasis};
pub use lambda1::{max_lambda1_lowrank, Lambda1Options};
pub use pca::{pca_cover_constraints, CoverConstraints, CoverMeasurements, RestrictionMoments};

/// Per-restart bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub restart: usize,
    pub seed: u64,
    /// Best objective over feasible iterates (`None` if the restart never became feasible).
    pub best: Option<f64>,
    pub iterations: usize,
    pub feasible: bool,
    pub converged: bool,
    /// Objective recorded at every feasible checkpoint.
    pub objective_trace: Vec<f64>,
}

/// Output of the low-rank solvers. The objective is that of a feasible point,
/// so it bounds the true optimum from one side only; `bound` says which.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub p_opt: HermitianMatrix,
    pub objective: f64,
    pub rank_bound_used: usize,
    /// Numerical rank of `p_opt` at the default threshold.
    pub rank: usize,
    pub restarts: usize,
    /// Index of the restart that produced `p_opt`.
    pub best_restart: usize,
    pub converged: bool,
    pub traces: Vec<RestartTrace>,
    pub membership: MembershipReport,
    /// `"lower_bound"` for maximization, `"upper_bound"` for minimization.
    pub bound: String,
}

/// Deterministic winner: best objective, ties to the lowest index.
pub(crate) fn pick_best(values: &[Option<f64>], maximize: bool) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        let Some(v) = *v else { continue };
        let better = match best {
            None => true,
            Some((_, b)) => {
                if maximize {
                    v > b
                } else {
                    v < b
                }
            }
        };
        if better {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}
