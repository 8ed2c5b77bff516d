//! Extreme points of spectrahedra.
//!
//! A spectrahedron here is the set of positive semidefinite matrices `P`
//! satisfying finitely many trace constraints `Tr(A_k P) = c_k`. The crate
//! decides whether a feasible `P` is an extreme point, produces an explicit
//! even perturbation `P +/- H` when it is not, and specializes the test to
//! correlation matrices (via the Hadamard square) and to two desk-scale
//! discretized optimization studies.
//!
//! | module | contents |
//! |---|---|
//! | [`linalg`] | Hermitian matrices, eigendecomposition, PSD powers, ranks, Schatten norms |
//! | [`spectrahedron`] | constraint sets, builders, membership |
//! | [`extremality`] | Gram rank test, facial dimension, rank bounds, Douglas factor, witnesses |
//! | [`elliptope`] | correlation matrices and the Hadamard rank inequality |
//! | [`applications`] | Galerkin operators, low-rank `lambda_1` ascent, entropy minimization |
//! | [`instances`] | seeded random instance families for oracle comparisons |
//! | [`cli`] | the `extremal` command-line front end |

pub mod error;
pub mod linalg;
pub mod spectrahedron;
pub mod extremality;
pub mod elliptope;
pub mod instances;
pub mod applications;
pub mod cli;

pub use error::{Error, Result};
pub use linalg::{Field, HermitianMatrix, SquareMatrix};
pub use spectrahedron::{MembershipReport, Spectrahedron};
