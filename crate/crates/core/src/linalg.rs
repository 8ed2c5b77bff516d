//! Dense self-adjoint matrix arithmetic over the real or complex field.
//!
//! Every matrix is stored as a complex `nalgebra` matrix together with a
//! [`Field`] tag. Real-field matrices keep all imaginary parts at zero and are
//! decomposed with the real symmetric solver so that eigenvectors stay real.

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default feasibility / PSD tolerance used across the crate.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative asymmetry above which a matrix is rejected as non-Hermitian.
pub const HERMITIAN_REJECT_TOL: f64 = 1e-8;

const EIGEN_MAX_ITERS: usize = 10_000;

/// Scalar field of the underlying Hilbert space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Real dimension of the space of self-adjoint `r x r` matrices.
    pub fn hermitian_dim(self, r: usize) -> usize {
        match self {
            Field::Real => r * (r + 1) / 2,
            Field::Complex => r * r,
        }
    }

    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field `{other}`"))),
        }
    }
}

/// Real-part inner product `Re Tr(a* b)` on matrices of equal shape.
pub fn real_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn has_imaginary(a: &CMatrix) -> bool {
    a.iter().any(|z| z.im != 0.0)
}

/// A general square matrix; used for raw constraint input and Hadamard products.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    field: Field,
    data: CMatrix,
}

impl SquareMatrix {
    pub fn new(field: Field, data: CMatrix) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::Shape(format!(
                "expected a square matrix, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.nrows() == 0 {
            return Err(Error::Shape("matrix dimension must be at least 1".into()));
        }
        if field == Field::Real && has_imaginary(&data) {
            return Err(Error::Shape("real-field matrix has nonzero imaginary entries".into()));
        }
        Ok(Self { field, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("rows do not form a square matrix".into()));
        }
        let data = CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0));
        Self::new(Field::Real, data)
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }
}

impl From<HermitianMatrix> for SquareMatrix {
    fn from(h: HermitianMatrix) -> Self {
        SquareMatrix { field: h.field, data: h.data }
    }
}

/// A finite self-adjoint matrix.
///
/// Construction symmetrizes the input (`(M + M*)/2`) after rejecting inputs
/// whose asymmetry exceeds `1e-8 * ||M||_F`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    field: Field,
    data: CMatrix,
}

impl HermitianMatrix {
    pub fn new(field: Field, data: CMatrix) -> Result<Self> {
        let sq = SquareMatrix::new(field, data)?;
        let a = sq.data;
        let asym = frobenius(&(&a - a.adjoint()));
        let scale = frobenius(&a);
        if asym > HERMITIAN_REJECT_TOL * scale {
            return Err(Error::Shape(format!(
                "matrix is not Hermitian (asymmetry {asym:e} relative to norm {scale:e})"
            )));
        }
        Ok(Self::symmetrized(field, a))
    }

    /// `(A + A*)/2` without the asymmetry check.
    pub(crate) fn symmetrized(field: Field, a: CMatrix) -> Self {
        let n = a.nrows();
        let mut data = a.clone();
        for i in 0..n {
            data[(i, i)] = C64::new(a[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
                data[(i, j)] = v;
                data[(j, i)] = v.conj();
            }
        }
        if field == Field::Real {
            data.iter_mut().for_each(|z| z.im = 0.0);
        }
        Self { field, data }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(Field::Real, m.map(|x| C64::new(x, 0.0)))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let sq = SquareMatrix::from_real_rows(rows)?;
        Self::new(Field::Real, sq.data)
    }

    pub fn identity(n: usize, field: Field) -> Self {
        Self { field, data: CMatrix::identity(n, n) }
    }

    pub fn zeros(n: usize, field: Field) -> Self {
        Self { field, data: CMatrix::zeros(n, n) }
    }

    pub fn diagonal(field: Field, diag: &[f64]) -> Self {
        let d = CVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self { field, data: CMatrix::from_diagonal(&d) }
    }

    /// `x x*`
    pub fn outer(field: Field, x: &CVector) -> Result<Self> {
        Self::gram_of_columns(field, &CMatrix::from_columns(&[x.clone()]))
    }

    /// `V V*` for an `n x k` factor.
    pub fn gram_of_columns(field: Field, v: &CMatrix) -> Result<Self> {
        if field == Field::Real && has_imaginary(v) {
            return Err(Error::Shape("real-field factor has imaginary entries".into()));
        }
        if v.nrows() == 0 {
            return Err(Error::Shape("factor has no rows".into()));
        }
        Ok(Self::symmetrized(field, v * v.adjoint()))
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.data.map(|z| z.re)
    }

    /// Reinterpret over a (possibly larger) field.
    pub fn with_field(&self, field: Field) -> Result<Self> {
        if field == Field::Real && has_imaginary(&self.data) {
            return Err(Error::Shape("cannot view a complex matrix over the real field".into()));
        }
        Ok(Self { field, data: self.data.clone() })
    }

    pub fn trace(&self) -> f64 {
        self.data.diagonal().iter().map(|z| z.re).sum()
    }

    /// `Tr(self * other)`; real for Hermitian arguments.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij)
        real_inner(&other.data, &self.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.data)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { field: self.field, data: &self.data * C64::new(s, 0.0) }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<Self> {
        self.check_same_n(other)?;
        Ok(Self { field: self.field.join(other.field), data: &self.data + &other.data })
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<Self> {
        self.check_same_n(other)?;
        Ok(Self { field: self.field.join(other.field), data: &self.data - &other.data })
    }

    /// `self * inner * self`, Hermitian whenever both factors are.
    pub fn sandwich(&self, inner: &HermitianMatrix) -> Result<Self> {
        self.check_same_n(inner)?;
        let prod = &self.data * &inner.data * &self.data;
        Ok(Self::symmetrized(self.field.join(inner.field), prod))
    }

    /// `U M U*`
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.n() {
            return Err(Error::Shape("conjugating matrix has wrong column count".into()));
        }
        let field = if has_imaginary(u) { Field::Complex } else { self.field };
        Ok(Self::symmetrized(field, u * &self.data * u.adjoint()))
    }

    pub fn check_same_n(&self, other: &HermitianMatrix) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Shape(format!(
                "dimension mismatch: {} vs {}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }
}

/// Eigen-pairs of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub field: Field,
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_j g(lambda_j) f_j f_j*` over the indices where `g` returns `Some`.
    pub fn spectral_map(&self, mut g: impl FnMut(f64) -> Option<f64>) -> HermitianMatrix {
        let n = self.n();
        let mut acc = CMatrix::zeros(n, n);
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            if let Some(w) = g(lambda) {
                let f = self.eigenvectors.column(j);
                acc += (&f * f.adjoint()) * C64::new(w, 0.0);
            }
        }
        HermitianMatrix::symmetrized(self.field, acc)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.spectral_map(Some)
    }

    pub fn reconstruction_residual(&self, m: &HermitianMatrix) -> f64 {
        frobenius(&(self.reconstruct().data - &m.data))
    }

    pub fn orthonormality_residual(&self) -> f64 {
        let v = &self.eigenvectors;
        let n = v.ncols();
        frobenius(&(v.adjoint() * v - CMatrix::identity(n, n)))
    }

    /// Eigenvectors whose eigenvalue lies strictly above `threshold`, as columns.
    pub fn range_basis(&self, threshold: f64) -> CMatrix {
        let cols: Vec<CVector> = self
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > threshold)
            .map(|(j, _)| self.eigenvectors.column(j).into_owned())
            .collect();
        if cols.is_empty() {
            CMatrix::zeros(self.n(), 0)
        } else {
            CMatrix::from_columns(&cols)
        }
    }

    /// `P^alpha` restricted to eigenvalues above `threshold`; the rest map to zero.
    pub fn truncated_power(&self, alpha: f64, threshold: f64) -> HermitianMatrix {
        self.spectral_map(|l| (l > threshold).then(|| l.powf(alpha)))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.eigenvalues.iter().map(|l| l.abs()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

fn sorted_decomposition(field: Field, values: Vec<f64>, vectors: CMatrix) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let eigenvalues = order.iter().map(|&j| values[j]).collect();
    let cols: Vec<CVector> = order.iter().map(|&j| vectors.column(j).into_owned()).collect();
    EigenDecomposition { field, eigenvalues, eigenvectors: CMatrix::from_columns(&cols) }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eigh(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let non_converged = Error::NonConvergence { iterations: EIGEN_MAX_ITERS };
    match m.field {
        Field::Real => {
            let eig = SymmetricEigen::try_new(m.real_part(), f64::EPSILON, EIGEN_MAX_ITERS)
                .ok_or(non_converged)?;
            let vectors = eig.eigenvectors.map(|x| C64::new(x, 0.0));
            Ok(sorted_decomposition(Field::Real, eig.eigenvalues.iter().copied().collect(), vectors))
        }
        Field::Complex => {
            let eig = SymmetricEigen::try_new(m.data.clone(), f64::EPSILON, EIGEN_MAX_ITERS)
                .ok_or(non_converged)?;
            Ok(sorted_decomposition(
                Field::Complex,
                eig.eigenvalues.iter().copied().collect(),
                eig.eigenvectors,
            ))
        }
    }
}

/// Outcome of a numerical rank decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankDecision {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub threshold_used: f64,
}

impl RankDecision {
    /// Decide the rank from descending singular values. With no explicit
    /// tolerance the threshold is `n * eps * sigma_max`.
    pub fn from_singular_values(singular_values: Vec<f64>, n: usize, tol: Option<f64>) -> Self {
        let sigma_max = singular_values.first().copied().unwrap_or(0.0);
        let threshold_used = tol.unwrap_or_else(|| default_rank_threshold(n, sigma_max));
        let rank = singular_values.iter().filter(|&&s| s > threshold_used).count();
        Self { rank, singular_values, threshold_used }
    }
}

pub fn default_rank_threshold(n: usize, sigma_max: f64) -> f64 {
    n as f64 * f64::EPSILON * sigma_max
}

pub fn numerical_rank(m: &HermitianMatrix, tol: Option<f64>) -> Result<RankDecision> {
    let eig = eigh(m)?;
    Ok(RankDecision::from_singular_values(eig.singular_values(), m.n(), tol))
}

/// `P^alpha` for PSD `P` (within `psd_tol`). Eigenvalues at or below the rank
/// threshold (`rank_tol`, or the default convention) are dropped, which makes
/// negative powers pseudo-powers.
pub fn psd_power_with(
    p: &HermitianMatrix,
    alpha: f64,
    psd_tol: f64,
    rank_tol: Option<f64>,
) -> Result<HermitianMatrix> {
    let eig = eigh(p)?;
    let min = eig.min_eigenvalue();
    if min < -psd_tol {
        return Err(Error::NotPsd { min_eigenvalue: min, tol: psd_tol });
    }
    let rank = RankDecision::from_singular_values(eig.singular_values(), p.n(), rank_tol);
    Ok(eig.truncated_power(alpha, rank.threshold_used))
}

pub fn psd_power(p: &HermitianMatrix, alpha: f64) -> Result<HermitianMatrix> {
    psd_power_with(p, alpha, DEFAULT_TOL, None)
}

/// Schatten p-norm `(sum_j sigma_j^p)^(1/p)`; `p = inf` gives the operator norm.
pub fn schatten_norm(m: &HermitianMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("Schatten norm requires p >= 1, got {p}")));
    }
    let s = eigh(m)?.singular_values();
    if p.is_infinite() {
        return Ok(s.first().copied().unwrap_or(0.0));
    }
    Ok(s.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p))
}

pub fn operator_norm(m: &HermitianMatrix) -> Result<f64> {
    schatten_norm(m, f64::INFINITY)
}

/// Eigenvalues of a real symmetric matrix (any size, including empty), descending.
pub fn real_symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITERS)
        .ok_or(Error::NonConvergence { iterations: EIGEN_MAX_ITERS })?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

pub fn min_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    Ok(eigh(m)?.min_eigenvalue())
}

pub fn is_psd(m: &HermitianMatrix, tol: f64) -> bool {
    min_eigenvalue(m).map(|l| l >= -tol).unwrap_or(false)
}

// --- JSON matrix format -----------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryJson {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    field: Field,
    n: usize,
    rows: Vec<Vec<EntryJson>>,
}

fn to_json_repr(field: Field, data: &CMatrix) -> MatrixJson {
    let n = data.nrows();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let z = data[(i, j)];
                    match field {
                        Field::Real => EntryJson::Real(z.re),
                        Field::Complex => EntryJson::Complex([z.re, z.im]),
                    }
                })
                .collect()
        })
        .collect();
    MatrixJson { field, n, rows }
}

fn from_json_repr(repr: MatrixJson) -> std::result::Result<(Field, CMatrix), String> {
    let n = repr.n;
    if n == 0 {
        return Err("matrix dimension must be at least 1".into());
    }
    if repr.rows.len() != n || repr.rows.iter().any(|r| r.len() != n) {
        return Err(format!("rows do not match declared dimension {n}"));
    }
    let mut data = CMatrix::zeros(n, n);
    for (i, row) in repr.rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            data[(i, j)] = match (repr.field, e) {
                (_, EntryJson::Real(x)) => C64::new(*x, 0.0),
                (Field::Complex, EntryJson::Complex([re, im])) => C64::new(*re, *im),
                (Field::Real, EntryJson::Complex(_)) => {
                    return Err(format!("complex entry at ({i}, {j}) in a real matrix"))
                }
            };
        }
    }
    Ok((repr.field, data))
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json_repr(self.field, &self.data).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (field, data) = from_json_repr(MatrixJson::deserialize(d)?).map_err(D::Error::custom)?;
        SquareMatrix::new(field, data).map_err(D::Error::custom)
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json_repr(self.field, &self.data).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (field, data) = from_json_repr(MatrixJson::deserialize(d)?).map_err(D::Error::custom)?;
        HermitianMatrix::new(field, data).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn trine() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[
            vec![1.0, -0.5, -0.5],
            vec![-0.5, 1.0, -0.5],
            vec![-0.5, -0.5, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn eigh_diagonal_and_two_by_two() {
        let d = HermitianMatrix::diagonal(Field::Real, &[1.0, 3.0]);
        let e = eigh(&d).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 1.0]);
        assert_abs_diff_eq!(e.eigenvectors[(1, 0)].norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.eigenvectors[(0, 1)].norm(), 1.0, epsilon = 1e-15);

        let m = HermitianMatrix::from_real_rows(&[vec![1.0, -0.5], vec![-0.5, 1.0]]).unwrap();
        let e = eigh(&m).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn complex_eigenvalues_are_real() {
        let data = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        );
        let m = HermitianMatrix::new(Field::Complex, data).unwrap();
        let e = eigh(&m).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
        assert!(e.reconstruction_residual(&m) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian_and_empty() {
        let r = HermitianMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]);
        assert!(matches!(r, Err(Error::Shape(_))));
        assert!(HermitianMatrix::from_real_rows(&[]).is_err());
        let tiny = HermitianMatrix::from_real_rows(&[vec![1.0, 1.0 + 1e-12], vec![1.0, 1.0]]).unwrap();
        assert_eq!(tiny.get(0, 1), tiny.get(1, 0));
    }

    #[test]
    fn psd_power_cases() {
        let p = HermitianMatrix::diagonal(Field::Real, &[4.0, 0.0]);
        let s = psd_power(&p, 0.5).unwrap();
        assert_abs_diff_eq!(s.get(0, 0).re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.get(1, 1).re, 0.0, epsilon = 1e-14);

        let pinv = psd_power(&p, -1.0).unwrap();
        assert_abs_diff_eq!(pinv.get(0, 0).re, 0.25, epsilon = 1e-14);
        assert_eq!(pinv.get(1, 1).re, 0.0);

        for alpha in [-1.0, -0.5, 0.0, 0.5, 2.0, 3.7] {
            let id = HermitianMatrix::identity(4, Field::Complex);
            let r = psd_power(&id, alpha).unwrap();
            assert!(frobenius(&(r.as_matrix() - id.as_matrix())) < 1e-14);
        }
    }

    #[test]
    fn psd_power_rejects_indefinite() {
        let m = HermitianMatrix::diagonal(Field::Real, &[1.0, -0.25]);
        match psd_power(&m, 0.5) {
            Err(Error::NotPsd { min_eigenvalue, .. }) => assert_abs_diff_eq!(min_eigenvalue, -0.25),
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&HermitianMatrix::zeros(3, Field::Real), None).unwrap().rank, 0);
        let ones = HermitianMatrix::from_real_rows(&vec![vec![1.0; 3]; 3]).unwrap();
        assert_eq!(numerical_rank(&ones, None).unwrap().rank, 1);
        let t = numerical_rank(&trine(), None).unwrap();
        assert_eq!(t.rank, 2);
        assert_abs_diff_eq!(t.singular_values[0], 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(t.singular_values[1], 1.5, epsilon = 1e-14);
        let explicit = numerical_rank(&trine(), Some(1.6)).unwrap();
        assert_eq!(explicit.rank, 0);
        assert_eq!(explicit.threshold_used, 1.6);
    }

    #[test]
    fn schatten_examples() {
        assert_abs_diff_eq!(
            schatten_norm(&HermitianMatrix::identity(3, Field::Real), 1.0).unwrap(),
            3.0,
            epsilon = 1e-14
        );
        let d = HermitianMatrix::diagonal(Field::Real, &[3.0, -4.0]);
        assert_abs_diff_eq!(schatten_norm(&d, 2.0).unwrap(), 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(operator_norm(&d).unwrap(), 4.0, epsilon = 1e-14);
        assert!(matches!(schatten_norm(&d, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&HermitianMatrix::identity(5, Field::Real), 0.0));
        assert!(!is_psd(&HermitianMatrix::diagonal(Field::Real, &[1.0, -1e-3]), 1e-9));
        assert!(is_psd(&HermitianMatrix::diagonal(Field::Real, &[1.0, -1e-10]), 1e-9));
    }

    #[test]
    fn json_round_trip_preserves_literals() {
        let text = r#"{"field":"complex","n":2,"rows":[[1.0,[0.1,0.30000000000000004]],[[0.1,-0.30000000000000004],2.5]]}"#;
        let m: HermitianMatrix = serde_json::from_str(text).unwrap();
        assert_eq!(m.get(0, 1), C64::new(0.1, 0.30000000000000004));
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(
            back,
            r#"{"field":"complex","n":2,"rows":[[[1.0,0.0],[0.1,0.30000000000000004]],[[0.1,-0.30000000000000004],[2.5,0.0]]]}"#
        );
        let again: HermitianMatrix = serde_json::from_str(&back).unwrap();
        assert_eq!(again, m);

        let bad = r#"{"field":"real","n":2,"rows":[[1.0,[0.0,1.0]],[0.0,1.0]]}"#;
        assert!(serde_json::from_str::<HermitianMatrix>(bad).is_err());
        let short = r#"{"field":"real","n":3,"rows":[[1.0,0.0],[0.0,1.0]]}"#;
        assert!(serde_json::from_str::<HermitianMatrix>(short).is_err());
    }
}
