//! Correlation matrices: PSD matrices with unit diagonal.
//!
//! For the elliptope constraints `(e_j e_j*, 1)` the perturbation Gram matrix
//! is entrywise `Tr(P E_i P E_j) = P_ji P_ij = |P_ij|^2`. Over the reals this is the
//! Hadamard square `P ⊙ P`; over the complex field it is `P ⊙ conj(P)`, which
//! is what the extremality shortcut and the rank-inequality check use.
//! [`hadamard_square`] itself is the plain entrywise square in both fields.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremality::{extremality_rank_test, ExtremalityOptions, ExtremalityReport};
use crate::instances::seeded_rng;
use crate::linalg::{
    eigh, real_symmetric_eigenvalues, CMatrix, Field, HermitianMatrix, RankDecision, SquareMatrix, C64,
};
use crate::spectrahedron::{Constraint, Spectrahedron};

/// A Hermitian PSD matrix with diagonal exactly one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CorrelationMatrix(HermitianMatrix);

impl CorrelationMatrix {
    /// Validate `m` (PSD within `tol`, diagonal within `tol` of one) and snap
    /// the diagonal to exactly one.
    pub fn new(m: HermitianMatrix, tol: f64) -> Result<Self> {
        let n = m.n();
        for i in 0..n {
            let d = m.get(i, i).re;
            if (d - 1.0).abs() > tol {
                return Err(Error::Domain(format!("diagonal entry {i} is {d}, not 1")));
            }
        }
        let min = eigh(&m)?.min_eigenvalue();
        if min < -tol {
            return Err(Error::NotPsd { min_eigenvalue: min, tol });
        }
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j).norm();
                if v > 1.0 + tol {
                    return Err(Error::Domain(format!("entry ({i}, {j}) has magnitude {v} > 1")));
                }
            }
        }
        let mut data = m.as_matrix().clone();
        for i in 0..n {
            data[(i, i)] = C64::new(1.0, 0.0);
        }
        Ok(Self(HermitianMatrix::new(m.field(), data)?))
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_inner(self) -> HermitianMatrix {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }
}

impl<'de> Deserialize<'de> for CorrelationMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = HermitianMatrix::deserialize(d)?;
        CorrelationMatrix::new(m, crate::linalg::DEFAULT_TOL).map_err(D::Error::custom)
    }
}

pub fn hadamard_product(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    if a.n() != b.n() {
        return Err(Error::Shape(format!("Hadamard product of {}x{} and {}x{}", a.n(), a.n(), b.n(), b.n())));
    }
    let data = a.as_matrix().component_mul(b.as_matrix());
    SquareMatrix::new(a.field().join(b.field()), data)
}

/// `A ⊙ A`, entrywise and without conjugation.
pub fn hadamard_square(a: &SquareMatrix) -> SquareMatrix {
    hadamard_product(a, a).expect("same shape")
}

/// `A ⊙ conj(A)`, i.e. `|A_ij|^2`. Equals the elliptope perturbation Gram matrix.
pub fn hadamard_modulus_square(a: &SquareMatrix) -> DMatrix<f64> {
    a.as_matrix().map(|z| z.norm_sqr())
}

fn real_symmetric_rank(m: &DMatrix<f64>, tol: Option<f64>) -> Result<RankDecision> {
    let mut s: Vec<f64> = real_symmetric_eigenvalues(m)?.iter().map(|x| x.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(RankDecision::from_singular_values(s, m.nrows(), tol))
}

/// Extremality of a correlation matrix read directly off the rank of its
/// (modulus) Hadamard square.
pub fn elliptope_extreme_test(p: &CorrelationMatrix, field: Field, tol: f64) -> Result<ExtremalityReport> {
    let m = p.matrix().with_field(field)?;
    let p_rank = crate::linalg::numerical_rank(&m, None)?;
    let g = hadamard_modulus_square(&m.clone().into());
    let gram = real_symmetric_rank(&g, None)?;
    Ok(ExtremalityReport::assemble(field, m.n(), m.n(), p_rank, gram, "hadamard", tol))
}

/// `P = B A B` with `B_jj = 1/sqrt(A_jj)` on the nonzero diagonal and 0 elsewhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub p: HermitianMatrix,
    pub b: Vec<f64>,
    /// Diagonal entries at or below this value count as zero (`1e-12 * max diagonal`).
    pub tol_diag: f64,
}

pub fn normalize_to_correlation(a: &HermitianMatrix, tol: f64) -> Result<Normalized> {
    let min = eigh(a)?.min_eigenvalue();
    if min < -tol {
        return Err(Error::NotPsd { min_eigenvalue: min, tol });
    }
    let n = a.n();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    let max_diag = diag.iter().copied().fold(0.0, f64::max);
    let tol_diag = 1e-12 * max_diag;
    let b: Vec<f64> = diag.iter().map(|&d| if d > tol_diag { 1.0 / d.sqrt() } else { 0.0 }).collect();
    let mut data = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            data[(i, j)] = a.get(i, j) * (b[i] * b[j]);
        }
        if b[i] > 0.0 {
            data[(i, i)] = C64::new(1.0, 0.0);
        }
    }
    Ok(Normalized { p: HermitianMatrix::new(a.field(), data)?, b, tol_diag })
}

/// Hadamard rank inequality `rank(A ⊙ conj A) <= (rank A)^2` and its equality case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HadamardReport {
    pub rank: usize,
    /// `rank(A ⊙ conj(A))`; coincides with `plain_square_rank` for real inputs.
    pub lhs_rank: usize,
    /// `rank(A ⊙ A)` without conjugation.
    pub plain_square_rank: usize,
    /// `(rank A)^2`.
    pub rhs_bound: usize,
    /// `rank A (rank A + 1) / 2`, reported for real inputs.
    pub real_bound: Option<usize>,
    pub equality: bool,
    /// Extremality in `{P >= 0 : P_jj = A_jj}` over the complex field.
    pub extreme_in_diagonal_spectrahedron: bool,
    pub extremality: ExtremalityReport,
}

/// The spectrahedron `{P >= 0 : P_jj = d_j}`.
pub fn diagonal_spectrahedron(diag: &[f64], field: Field) -> Result<Spectrahedron> {
    let n = diag.len();
    let constraints = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            Constraint { label: Some(format!("diag[{j}]")), a: HermitianMatrix::diagonal(field, &e), c: diag[j] }
        })
        .collect();
    Spectrahedron::new(field, n, constraints)
}

pub fn hadamard_inequality_check(a: &HermitianMatrix, field: Field, tol: f64) -> Result<HadamardReport> {
    let a = a.with_field(field)?;
    let min = eigh(&a)?.min_eigenvalue();
    if min < -tol {
        return Err(Error::NotPsd { min_eigenvalue: min, tol });
    }
    let rank = crate::linalg::numerical_rank(&a, None)?.rank;
    let sq: SquareMatrix = a.clone().into();
    let lhs_rank = real_symmetric_rank(&hadamard_modulus_square(&sq), None)?.rank;
    let plain = hadamard_square(&sq);
    let plain_square_rank = plain_rank(&plain)?;
    let diag: Vec<f64> = (0..a.n()).map(|i| a.get(i, i).re).collect();
    let c = diagonal_spectrahedron(&diag, Field::Complex)?;
    let opts = ExtremalityOptions::with_tol(tol);
    let extremality = extremality_rank_test(&a.with_field(Field::Complex)?, &c, &opts)?;
    Ok(HadamardReport {
        rank,
        lhs_rank,
        plain_square_rank,
        rhs_bound: rank * rank,
        real_bound: (field == Field::Real).then(|| rank * (rank + 1) / 2),
        equality: lhs_rank == rank * rank,
        extreme_in_diagonal_spectrahedron: extremality.is_extreme,
        extremality,
    })
}

/// Rank of a complex symmetric (not necessarily Hermitian) matrix via its singular values.
fn plain_rank(m: &SquareMatrix) -> Result<usize> {
    let svd = nalgebra::SVD::try_new(m.as_matrix().clone(), false, false, f64::EPSILON, 10_000)
        .ok_or(Error::NonConvergence { iterations: 10_000 })?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(RankDecision::from_singular_values(s, m.n(), None).rank)
}

/// `V V*` for an `n x r` Gaussian `V` with rows normalized to unit length.
pub fn random_correlation(n: usize, rank: usize, field: Field, seed: u64) -> Result<CorrelationMatrix> {
    let mut rng = seeded_rng(seed);
    random_correlation_with(n, rank, field, &mut rng)
}

pub fn random_correlation_with(n: usize, rank: usize, field: Field, rng: &mut impl Rng) -> Result<CorrelationMatrix> {
    if n == 0 || rank == 0 || rank > n {
        return Err(Error::Domain(format!("target rank {rank} must lie in 1..={n}")));
    }
    let mut v = CMatrix::zeros(n, rank);
    for i in 0..n {
        loop {
            for j in 0..rank {
                v[(i, j)] = match field {
                    Field::Real => C64::new(rng.sample(StandardNormal), 0.0),
                    Field::Complex => C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
                };
            }
            let norm = v.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for j in 0..rank {
                    v[(i, j)] /= norm;
                }
                break;
            }
        }
    }
    let mut data = &v * v.adjoint();
    for i in 0..n {
        data[(i, i)] = C64::new(1.0, 0.0);
    }
    Ok(CorrelationMatrix(HermitianMatrix::symmetrized(field, data)))
}
