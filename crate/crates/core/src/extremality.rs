//! Extreme-point tests for spectrahedra.
//!
//! A feasible `P` is extreme iff the family `{sqrt(P) A_k sqrt(P)}` spans the
//! real vector space `X(P)` of self-adjoint matrices whose range lies in the
//! range of `P`. Two computational routes are provided:
//!
//! * [`extremality_rank_test`] compares the rank of the perturbation Gram
//!   matrix `G_ij = Tr(P A_i P A_j)` with `dim X(P)`;
//! * [`find_even_perturbation`] solves `Tr(sqrt(P) A_k sqrt(P) X) = 0` over an
//!   explicit basis of `X(P)` and, when a nonzero solution exists, returns the
//!   perturbation `H = sqrt(P) X sqrt(P)` with `P +/- H` feasible.
//!
//! Rank decisions are threshold-relative; every report records the
//! thresholds used for `P` and for `G`.

use nalgebra::{DMatrix, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    default_rank_threshold, eigh, frobenius, real_inner, real_symmetric_eigenvalues, CMatrix, CVector,
    EigenDecomposition, Field, HermitianMatrix, RankDecision, C64, DEFAULT_TOL,
};
use crate::spectrahedron::{check_point, membership, MembershipReport, Spectrahedron};

/// Relative floor on `||H||_F / ||P||_F` below which a witness is discarded.
pub const DEFAULT_WITNESS_FLOOR: f64 = 1e-12;

/// Operator norm the witness `X` is scaled to.
pub const WITNESS_NORM: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalityOptions {
    /// Feasibility and PSD tolerance.
    pub tol: f64,
    /// Rank threshold for `P`; `None` uses `n * eps * sigma_max`.
    pub rank_tol: Option<f64>,
    /// Rank threshold for the Gram matrix; `None` uses `m * eps * sigma_max(G)`.
    pub gram_tol: Option<f64>,
    /// Relative witness floor, multiplied by `||P||_F`.
    pub witness_floor: f64,
}

impl Default for ExtremalityOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, rank_tol: None, gram_tol: None, witness_floor: DEFAULT_WITNESS_FLOOR }
    }
}

impl ExtremalityOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Spectral data of a PSD point restricted to its numerical range.
struct PointAnalysis {
    field: Field,
    eig: EigenDecomposition,
    rank: RankDecision,
    /// `n x r` orthonormal basis of the numerical range.
    range: CMatrix,
    /// `sqrt(lambda_j)` for the retained eigenvalues.
    sqrt_values: Vec<f64>,
}

impl PointAnalysis {
    fn new(p: &HermitianMatrix, field: Field, opts: &ExtremalityOptions) -> Result<Self> {
        let p = p.with_field(field)?;
        let eig = eigh(&p)?;
        let min = eig.min_eigenvalue();
        if min < -opts.tol {
            return Err(Error::NotPsd { min_eigenvalue: min, tol: opts.tol });
        }
        let rank = RankDecision::from_singular_values(eig.singular_values(), p.n(), opts.rank_tol);
        let range = eig.range_basis(rank.threshold_used);
        let sqrt_values = eig
            .eigenvalues
            .iter()
            .filter(|&&l| l > rank.threshold_used)
            .map(|l| l.sqrt())
            .collect();
        Ok(Self { field, eig, rank, range, sqrt_values })
    }

    fn r(&self) -> usize {
        self.range.ncols()
    }

    fn sqrt_p(&self) -> HermitianMatrix {
        self.eig.truncated_power(0.5, self.rank.threshold_used)
    }

    /// `D^{1/2} F* A F D^{1/2}`: the `r x r` coordinates of `sqrt(P) A sqrt(P)`.
    fn reduced(&self, a: &HermitianMatrix) -> CMatrix {
        let f = &self.range;
        let mut t = f.adjoint() * a.as_matrix() * f;
        let r = self.r();
        for i in 0..r {
            for j in 0..r {
                t[(i, j)] *= self.sqrt_values[i] * self.sqrt_values[j];
            }
        }
        t
    }

    /// Lift `r x r` coordinates `Y` to `F Y F*`.
    fn lift(&self, y: &CMatrix) -> HermitianMatrix {
        HermitianMatrix::symmetrized(self.field, &self.range * y * self.range.adjoint())
    }

    /// `X -> sqrt(P) X sqrt(P)` for `X = F Y F*`.
    fn lift_sandwich(&self, y: &CMatrix) -> HermitianMatrix {
        let r = self.r();
        let mut s = y.clone();
        for i in 0..r {
            for j in 0..r {
                s[(i, j)] *= self.sqrt_values[i] * self.sqrt_values[j];
            }
        }
        self.lift(&s)
    }
}

/// Orthonormal basis of the real space of `r x r` self-adjoint matrices under
/// `Re Tr(A B)`: diagonal units, symmetric pairs over `sqrt(2)`, and for the
/// complex field the antisymmetric imaginary pairs.
pub fn hermitian_basis(r: usize, field: Field) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(field.hermitian_dim(r));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..r {
        let mut e = CMatrix::zeros(r, r);
        e[(i, i)] = C64::new(1.0, 0.0);
        basis.push(e);
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let mut e = CMatrix::zeros(r, r);
            e[(i, j)] = C64::new(s, 0.0);
            e[(j, i)] = C64::new(s, 0.0);
            basis.push(e);
        }
    }
    if field == Field::Complex {
        for i in 0..r {
            for j in (i + 1)..r {
                // i (e_i e_j* - e_j e_i*) / sqrt(2)
                let mut e = CMatrix::zeros(r, r);
                e[(i, j)] = C64::new(0.0, s);
                e[(j, i)] = C64::new(0.0, -s);
                basis.push(e);
            }
        }
    }
    basis
}

fn analyse(p: &HermitianMatrix, c: &Spectrahedron, opts: &ExtremalityOptions) -> Result<PointAnalysis> {
    check_point(c, p)?;
    PointAnalysis::new(p, c.field(), opts)
}

fn gram_from(analysis: &PointAnalysis, c: &Spectrahedron) -> Result<DMatrix<f64>> {
    let sqrt_p = analysis.sqrt_p();
    let s: Vec<HermitianMatrix> =
        c.constraints().iter().map(|con| sqrt_p.sandwich(&con.a)).collect::<Result<_>>()?;
    let m = s.len();
    let mut g = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = s[i].trace_product(&s[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// `G_ij = Tr((sqrt(P) A_i sqrt(P)) (sqrt(P) A_j sqrt(P)))`, a real symmetric PSD matrix.
///
/// `sqrt(P)` is taken over the numerical range of `P` (default rank threshold).
pub fn perturbation_gram(p: &HermitianMatrix, c: &Spectrahedron) -> Result<DMatrix<f64>> {
    perturbation_gram_with(p, c, &ExtremalityOptions::default())
}

pub fn perturbation_gram_with(
    p: &HermitianMatrix,
    c: &Spectrahedron,
    opts: &ExtremalityOptions,
) -> Result<DMatrix<f64>> {
    let analysis = analyse(p, c, opts)?;
    gram_from(&analysis, c)
}

/// Outcome of the rank-based extremality test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalityReport {
    pub field: Field,
    pub n: usize,
    pub n_constraints: usize,
    pub rank_p: usize,
    pub gram_rank: usize,
    pub dim_x: usize,
    pub is_extreme: bool,
    pub facial_dimension: usize,
    pub p_rank: RankDecision,
    pub gram: RankDecision,
    /// `"gram"` for the general route, `"hadamard"` for the elliptope shortcut.
    pub method: String,
    pub tol: f64,
}

impl ExtremalityReport {
    pub(crate) fn assemble(
        field: Field,
        n: usize,
        n_constraints: usize,
        p_rank: RankDecision,
        gram: RankDecision,
        method: &str,
        tol: f64,
    ) -> Self {
        let rank_p = p_rank.rank;
        let dim_x = field.hermitian_dim(rank_p);
        // G = L L^T with L of size m x dim_x, so any excess rank is rounding noise.
        let gram_rank = gram.rank.min(dim_x).min(n_constraints);
        Self {
            field,
            n,
            n_constraints,
            rank_p,
            gram_rank,
            dim_x,
            is_extreme: gram_rank == dim_x,
            facial_dimension: dim_x - gram_rank,
            p_rank,
            gram,
            method: method.to_string(),
            tol,
        }
    }
}

fn require_feasible(c: &Spectrahedron, p: &HermitianMatrix, tol: f64) -> Result<MembershipReport> {
    let report = membership(c, p, tol)?;
    if !report.feasible {
        return Err(Error::Infeasible(Box::new(report)));
    }
    Ok(report)
}

pub fn extremality_rank_test(
    p: &HermitianMatrix,
    c: &Spectrahedron,
    opts: &ExtremalityOptions,
) -> Result<ExtremalityReport> {
    require_feasible(c, p, opts.tol)?;
    let analysis = analyse(p, c, opts)?;
    let g = gram_from(&analysis, c)?;
    let g_values: Vec<f64> = real_symmetric_eigenvalues(&g)?.iter().map(|x| x.abs()).collect();
    let mut g_values = g_values;
    g_values.sort_by(|a, b| b.total_cmp(a));
    let gram = RankDecision::from_singular_values(g_values, c.len(), opts.gram_tol);
    Ok(ExtremalityReport::assemble(c.field(), c.n(), c.len(), analysis.rank, gram, "gram", opts.tol))
}

/// `dim X(P) - rank G`; zero exactly at extreme points.
pub fn facial_dimension(p: &HermitianMatrix, c: &Spectrahedron, opts: &ExtremalityOptions) -> Result<usize> {
    Ok(extremality_rank_test(p, c, opts)?.facial_dimension)
}

/// Largest rank an extreme point can have with `n_constraints` constraints:
/// the largest `r` with `r(r+1)/2 <= n` (real) or `r^2 <= n` (complex).
pub fn bp_rank_bound(n_constraints: usize, field: Field) -> usize {
    let mut r = 0;
    while field.hermitian_dim(r + 1) <= n_constraints {
        r += 1;
    }
    r
}

/// `H = sqrt(P) X sqrt(P)` recovered from an even perturbation `H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DouglasFactor {
    pub x: HermitianMatrix,
    pub operator_norm: f64,
    /// `||sqrt(P) X sqrt(P) - H||_F`.
    pub reconstruction_residual: f64,
    pub rank_threshold: f64,
}

/// Factor an even perturbation `H` of `P` (both `P + H` and `P - H` PSD) as
/// `sqrt(P) X sqrt(P)` with `X` supported on the range of `P`.
pub fn douglas_factor(p: &HermitianMatrix, h: &HermitianMatrix, tol: f64) -> Result<DouglasFactor> {
    douglas_factor_with(p, h, tol, None)
}

pub fn douglas_factor_with(
    p: &HermitianMatrix,
    h: &HermitianMatrix,
    tol: f64,
    rank_tol: Option<f64>,
) -> Result<DouglasFactor> {
    p.check_same_n(h)?;
    let field = p.field().join(h.field());
    let p = p.with_field(field)?;
    let h = h.with_field(field)?;
    let eig = eigh(&p)?;
    if eig.min_eigenvalue() < -tol {
        return Err(Error::NotPsd { min_eigenvalue: eig.min_eigenvalue(), tol });
    }
    for (side, m) in [("P + H", p.add(&h)?), ("P - H", p.sub(&h)?)] {
        let min = eigh(&m)?.min_eigenvalue();
        if min < -tol {
            return Err(Error::Domain(format!(
                "{side} is not positive semidefinite (most negative eigenvalue {min:e}); H is not an even perturbation of P"
            )));
        }
    }
    let sv = eig.singular_values();
    let threshold = rank_tol.unwrap_or_else(|| default_rank_threshold(p.n(), sv[0]));
    let inv_sqrt = eig.truncated_power(-0.5, threshold);
    let x = inv_sqrt.sandwich(&h)?;
    let sqrt_p = eig.truncated_power(0.5, threshold);
    let reconstruction_residual = frobenius(&(sqrt_p.sandwich(&x)?.as_matrix() - h.as_matrix()));
    let operator_norm = eigh(&x)?.singular_values().first().copied().unwrap_or(0.0);
    Ok(DouglasFactor { x, operator_norm, reconstruction_residual, rank_threshold: threshold })
}

/// A certificate of non-extremality: `P +/- H` both lie in the spectrahedron.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationWitness {
    pub x: HermitianMatrix,
    pub h: HermitianMatrix,
    pub norm_x: f64,
    pub feasibility_plus: MembershipReport,
    pub feasibility_minus: MembershipReport,
    /// `max(||(I - Pi) X||_F, ||X (I - Pi)||_F)` for the range projector `Pi`.
    pub range_residual: f64,
    /// Dimension of the solution space of the linear system.
    pub null_space_dim: usize,
    /// Singular values of the system matrix, descending.
    pub system_singular_values: Vec<f64>,
    pub gram_threshold: f64,
}

impl PerturbationWitness {
    /// `Tr(A_k H)` for every constraint.
    pub fn constraint_values(&self, c: &Spectrahedron) -> Vec<f64> {
        c.constraints().iter().map(|con| con.a.trace_product(&self.h)).collect()
    }
}

/// Null vectors of the real system `L y = 0`, `L[k][m] = Tr(sqrt(P) A_k sqrt(P) B_m)`.
struct NullSpace {
    singular_values: Vec<f64>,
    threshold: f64,
    dim: usize,
    /// Right singular vector for the smallest singular value, if `dim > 0`.
    vector: Option<Vec<f64>>,
}

fn solve_null_space(l: &DMatrix<f64>, gram_tol: Option<f64>) -> Result<NullSpace> {
    let (m, d) = l.shape();
    if d == 0 {
        return Ok(NullSpace { singular_values: vec![], threshold: 0.0, dim: 0, vector: None });
    }
    // Pad with zero rows so the SVD yields a full set of right singular vectors.
    let rows = m.max(d);
    let mut padded = DMatrix::zeros(rows, d);
    padded.view_mut((0, 0), (m, d)).copy_from(l);
    let svd = SVD::try_new(padded, false, true, f64::EPSILON, 10_000)
        .ok_or(Error::NonConvergence { iterations: 10_000 })?;
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..d).collect();
    let sv = svd.singular_values;
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));
    let singular_values: Vec<f64> = order.iter().map(|&i| sv[i]).collect();
    // Singular values of L are square roots of the eigenvalues of G = L L^T.
    let s_max = singular_values[0];
    let threshold = gram_tol.unwrap_or_else(|| default_rank_threshold(m, s_max * s_max));
    let rank = singular_values.iter().filter(|&&s| s * s > threshold).count().min(m);
    let dim = d - rank;
    let vector = (dim > 0).then(|| {
        let smallest = singular_values[d - 1];
        let pos = singular_values.iter().position(|&s| s == smallest).unwrap_or(d - 1);
        let idx = order[pos];
        v_t.row(idx).iter().copied().collect()
    });
    Ok(NullSpace { singular_values, threshold, dim, vector })
}

/// Search for a nonzero even perturbation of a feasible `P`. Returns `None`
/// exactly when `P` is (numerically) extreme.
pub fn find_even_perturbation(
    p: &HermitianMatrix,
    c: &Spectrahedron,
    opts: &ExtremalityOptions,
) -> Result<Option<PerturbationWitness>> {
    require_feasible(c, p, opts.tol)?;
    let analysis = analyse(p, c, opts)?;
    let r = analysis.r();
    let basis = hermitian_basis(r, c.field());
    let d = basis.len();
    let reduced: Vec<CMatrix> = c.constraints().iter().map(|con| analysis.reduced(&con.a)).collect();
    let l = DMatrix::from_fn(reduced.len(), d, |k, m| real_inner(&basis[m], &reduced[k]));
    let ns = solve_null_space(&l, opts.gram_tol)?;
    let Some(y) = ns.vector else {
        return Ok(None);
    };

    let mut coords = CMatrix::zeros(r, r);
    for (w, b) in y.iter().zip(&basis) {
        coords += b * C64::new(*w, 0.0);
    }
    let y_norm = eigh(&HermitianMatrix::symmetrized(c.field(), coords.clone()))?.singular_values()[0];
    if y_norm == 0.0 {
        return Ok(None);
    }
    coords *= C64::new(WITNESS_NORM / y_norm, 0.0);

    let p_field = p.with_field(c.field())?;
    let x = analysis.lift(&coords);
    let h = analysis.lift_sandwich(&coords);
    if h.frobenius_norm() <= opts.witness_floor * p_field.frobenius_norm() {
        return Ok(None);
    }
    let norm_x = eigh(&x)?.singular_values()[0];
    let projector = &analysis.range * analysis.range.adjoint();
    let complement = CMatrix::identity(c.n(), c.n()) - projector;
    let range_residual =
        frobenius(&(&complement * x.as_matrix())).max(frobenius(&(x.as_matrix() * &complement)));
    let feasibility_plus = membership(c, &p_field.add(&h)?, opts.tol)?;
    let feasibility_minus = membership(c, &p_field.sub(&h)?, opts.tol)?;
    Ok(Some(PerturbationWitness {
        x,
        h,
        norm_x,
        feasibility_plus,
        feasibility_minus,
        range_residual,
        null_space_dim: ns.dim,
        system_singular_values: ns.singular_values,
        gram_threshold: ns.threshold,
    }))
}

/// Whether `x x*` is a rank-one extreme point: its constraint values match the
/// targets and the targets are not all zero.
pub fn rank_one_extreme_check(c: &Spectrahedron, x: &CVector, tol: f64) -> Result<bool> {
    if x.len() != c.n() {
        return Err(Error::Shape(format!("vector has length {} but dimension is {}", x.len(), c.n())));
    }
    if x.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::Domain("rank-one check requires a nonzero vector".into()));
    }
    if c.targets().all(|t| t == 0.0) {
        return Ok(false);
    }
    let field = if x.iter().any(|z| z.im != 0.0) { Field::Complex } else { c.field() };
    let p = HermitianMatrix::outer(field, x)?;
    check_point(c, &p)?;
    Ok(c.constraints().iter().all(|con| (con.a.trace_product(&p) - con.c).abs() <= tol * con.scale()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrahedron::{density, elliptope};
    use approx::assert_abs_diff_eq;

    fn trine() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[
            vec![1.0, -0.5, -0.5],
            vec![-0.5, 1.0, -0.5],
            vec![-0.5, -0.5, 1.0],
        ])
        .unwrap()
    }

    fn opts() -> ExtremalityOptions {
        ExtremalityOptions::default()
    }

    #[test]
    fn hermitian_basis_is_orthonormal() {
        for field in [Field::Real, Field::Complex] {
            for r in 0..5 {
                let b = hermitian_basis(r, field);
                assert_eq!(b.len(), field.hermitian_dim(r));
                for (i, x) in b.iter().enumerate() {
                    assert_eq!(x, &x.adjoint());
                    for (j, y) in b.iter().enumerate() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert_abs_diff_eq!(real_inner(x, y), want, epsilon = 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn gram_of_density_at_maximally_mixed() {
        for n in 1..6 {
            let p = HermitianMatrix::identity(n, Field::Real).scale(1.0 / n as f64);
            let g = perturbation_gram(&p, &density(n, Field::Real).unwrap()).unwrap();
            assert_eq!(g.shape(), (1, 1));
            assert_abs_diff_eq!(g[(0, 0)], 1.0 / n as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn pure_density_state_is_extreme() {
        let x = CVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)]);
        let p = HermitianMatrix::outer(Field::Complex, &x).unwrap();
        let c = density(3, Field::Complex).unwrap();
        let rep = extremality_rank_test(&p, &c, &opts()).unwrap();
        assert_eq!((rep.rank_p, rep.gram_rank, rep.dim_x), (1, 1, 1));
        assert!(rep.is_extreme);
        assert!(find_even_perturbation(&p, &c, &opts()).unwrap().is_none());
    }

    #[test]
    fn identity_in_elliptope_three() {
        let c = elliptope(3, Field::Real).unwrap();
        let rep = extremality_rank_test(&HermitianMatrix::identity(3, Field::Real), &c, &opts()).unwrap();
        assert_eq!((rep.rank_p, rep.dim_x, rep.gram_rank, rep.facial_dimension), (3, 6, 3, 3));
        assert!(!rep.is_extreme);
    }

    #[test]
    fn trine_is_extreme() {
        let c = elliptope(3, Field::Real).unwrap();
        let rep = extremality_rank_test(&trine(), &c, &opts()).unwrap();
        assert_eq!((rep.rank_p, rep.dim_x, rep.gram_rank), (2, 3, 3));
        assert!(rep.is_extreme);
        assert!(find_even_perturbation(&trine(), &c, &opts()).unwrap().is_none());
    }

    #[test]
    fn facial_dimension_examples() {
        for n in 1..7 {
            let c = elliptope(n, Field::Real).unwrap();
            let f = facial_dimension(&HermitianMatrix::identity(n, Field::Real), &c, &opts()).unwrap();
            assert_eq!(f, n * (n - 1) / 2);
        }
        let p = HermitianMatrix::identity(2, Field::Real).scale(0.5);
        assert_eq!(facial_dimension(&p, &density(2, Field::Real).unwrap(), &opts()).unwrap(), 2);
        assert_eq!(facial_dimension(&trine(), &elliptope(3, Field::Real).unwrap(), &opts()).unwrap(), 0);
    }

    #[test]
    fn infeasible_point_is_rejected() {
        let c = density(2, Field::Real).unwrap();
        let p = HermitianMatrix::diagonal(Field::Real, &[0.7, 0.4]);
        assert!(matches!(extremality_rank_test(&p, &c, &opts()), Err(Error::Infeasible(_))));
        assert!(matches!(find_even_perturbation(&p, &c, &opts()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn zero_point_is_extreme() {
        let a = HermitianMatrix::diagonal(Field::Real, &[1.0, -1.0]);
        let con = crate::spectrahedron::Constraint { label: None, a, c: 0.0 };
        let c = Spectrahedron::new(Field::Real, 2, vec![con]).unwrap();
        let rep = extremality_rank_test(&HermitianMatrix::zeros(2, Field::Real), &c, &opts()).unwrap();
        assert_eq!((rep.rank_p, rep.dim_x, rep.gram_rank), (0, 0, 0));
        assert!(rep.is_extreme);
        assert!(find_even_perturbation(&HermitianMatrix::zeros(2, Field::Real), &c, &opts()).unwrap().is_none());
    }

    #[test]
    fn bp_examples() {
        assert_eq!(bp_rank_bound(4, Field::Complex), 2);
        assert_eq!(bp_rank_bound(3, Field::Real), 2);
        assert_eq!(bp_rank_bound(1, Field::Real), 1);
        assert_eq!(bp_rank_bound(1, Field::Complex), 1);
        assert_eq!(bp_rank_bound(0, Field::Complex), 0);
        assert_eq!(bp_rank_bound(5, Field::Real), 2);
        assert_eq!(bp_rank_bound(6, Field::Real), 3);
        assert_eq!(bp_rank_bound(8, Field::Complex), 2);
        assert_eq!(bp_rank_bound(9, Field::Complex), 3);
    }

    #[test]
    fn douglas_examples() {
        let p = HermitianMatrix::diagonal(Field::Real, &[1.0, 0.0]);
        for t in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            let h = HermitianMatrix::diagonal(Field::Real, &[t, 0.0]);
            let f = douglas_factor(&p, &h, 1e-12).unwrap();
            assert_abs_diff_eq!(f.x.get(0, 0).re, t, epsilon = 1e-14);
            assert_abs_diff_eq!(f.x.get(1, 1).re, 0.0, epsilon = 1e-14);
        }
        let h = HermitianMatrix::from_real_rows(&[vec![0.2, 0.5], vec![0.5, -0.1]]).unwrap();
        let f = douglas_factor(&HermitianMatrix::identity(2, Field::Real), &h, 1e-12).unwrap();
        assert!(frobenius(&(f.x.as_matrix() - h.as_matrix())) < 1e-14);
    }

    #[test]
    fn douglas_names_violated_side() {
        let p = HermitianMatrix::diagonal(Field::Real, &[1.0, 0.0]);
        let h = HermitianMatrix::diagonal(Field::Real, &[0.0, 0.5]);
        match douglas_factor(&p, &h, 1e-12) {
            Err(Error::Domain(msg)) => assert!(msg.contains("P - H"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let h = HermitianMatrix::diagonal(Field::Real, &[0.0, -0.5]);
        match douglas_factor(&p, &h, 1e-12) {
            Err(Error::Domain(msg)) => assert!(msg.contains("P + H"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_for_identity_in_elliptope_two() {
        let c = elliptope(2, Field::Real).unwrap();
        let p = HermitianMatrix::identity(2, Field::Real);
        let w = find_even_perturbation(&p, &c, &opts()).unwrap().expect("identity is not extreme");
        assert_eq!(w.null_space_dim, 1);
        assert_abs_diff_eq!(w.x.get(0, 0).re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.x.get(1, 1).re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.x.get(0, 1).re.abs(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(w.norm_x, 0.5, epsilon = 1e-14);
        assert!(w.feasibility_plus.feasible && w.feasibility_minus.feasible);
    }

    #[test]
    fn rank_one_extreme_points_of_ones() {
        let c = elliptope(3, Field::Real).unwrap();
        let j3 = HermitianMatrix::from_real_rows(&vec![vec![1.0; 3]; 3]).unwrap();
        assert!(find_even_perturbation(&j3, &c, &opts()).unwrap().is_none());
        let ones = CVector::from_element(3, C64::new(1.0, 0.0));
        assert!(rank_one_extreme_check(&c, &ones, 1e-12).unwrap());
        let d = density(2, Field::Real).unwrap();
        let e1 = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(rank_one_extreme_check(&d, &e1, 1e-12).unwrap());
        let half = CVector::from_vec(vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0)]);
        assert!(!rank_one_extreme_check(&d, &half, 1e-12).unwrap());
    }

    #[test]
    fn rank_one_with_zero_targets_and_zero_vector() {
        let a = HermitianMatrix::diagonal(Field::Real, &[1.0, -1.0]);
        let con = crate::spectrahedron::Constraint { label: None, a, c: 0.0 };
        let c = Spectrahedron::new(Field::Real, 2, vec![con]).unwrap();
        let x = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(!rank_one_extreme_check(&c, &x, 1e-12).unwrap());
        let z = CVector::zeros(2);
        assert!(matches!(rank_one_extreme_check(&c, &z, 1e-12), Err(Error::Domain(_))));
    }
}
