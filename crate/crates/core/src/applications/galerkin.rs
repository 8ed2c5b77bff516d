//! Orthonormal piecewise-Legendre bases on `[0, 1]` and Galerkin matrices of
//! multiplication and integral operators.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;

/// Legendre polynomial `P_k(x)` by the three-term recurrence.
pub fn legendre(k: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return p0;
    }
    for i in 1..k {
        let p2 = ((2 * i + 1) as f64 * x * p1 - i as f64 * p0) / (i + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `n`-point Gauss–Legendre nodes and weights on `[-1, 1]`; exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let p = legendre(n, x);
            let pm = legendre(n - 1, x);
            let dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let p = legendre(n, x);
        let pm = legendre(n - 1, x);
        let dp = n as f64 * (x * p - pm) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    (x.iter().map(|t| a + h * (t + 1.0)).collect(), w.iter().map(|v| v * h).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// `sqrt(2k+1) P_k(2u - 1)` on the whole interval.
    ShiftedLegendre,
    /// Normalized Legendre polynomials on each cell of a partition, zero elsewhere.
    PiecewiseLegendre,
}

/// An `L^2[0,1]`-orthonormal basis of piecewise polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalerkinBasis {
    pub kind: BasisKind,
    /// Cell boundaries `0 = t_0 < t_1 < ... < t_c = 1`.
    pub breakpoints: Vec<f64>,
    /// Polynomials per cell (degrees `0..per_cell`).
    pub per_cell: usize,
    /// Gauss points per cell used for matrix assembly.
    pub quad_order: usize,
}

impl GalerkinBasis {
    pub fn shifted_legendre(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("basis size must be at least 1".into()));
        }
        Ok(Self { kind: BasisKind::ShiftedLegendre, breakpoints: vec![0.0, 1.0], per_cell: m, quad_order: m + 2 })
    }

    pub fn piecewise(breakpoints: Vec<f64>, per_cell: usize) -> Result<Self> {
        if per_cell == 0 {
            return Err(Error::Domain("at least one polynomial per cell is required".into()));
        }
        if breakpoints.len() < 2
            || breakpoints[0] != 0.0
            || *breakpoints.last().unwrap() != 1.0
            || breakpoints.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Domain("breakpoints must increase strictly from 0 to 1".into()));
        }
        Ok(Self { kind: BasisKind::PiecewiseLegendre, breakpoints, per_cell, quad_order: per_cell + 2 })
    }

    pub fn with_quad_order(mut self, q: usize) -> Self {
        self.quad_order = q.max(1);
        self
    }

    pub fn cells(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn size(&self) -> usize {
        self.cells() * self.per_cell
    }

    fn cell_bounds(&self, cell: usize) -> (f64, f64) {
        (self.breakpoints[cell], self.breakpoints[cell + 1])
    }

    /// `(cell, degree)` of basis function `idx`.
    pub fn locate(&self, idx: usize) -> (usize, usize) {
        (idx / self.per_cell, idx % self.per_cell)
    }

    fn eval_on_cell(&self, cell: usize, degree: usize, u: f64) -> f64 {
        let (a, b) = self.cell_bounds(cell);
        let h = b - a;
        ((2 * degree + 1) as f64 / h).sqrt() * legendre(degree, 2.0 * (u - a) / h - 1.0)
    }

    pub fn eval(&self, idx: usize, u: f64) -> f64 {
        let (cell, degree) = self.locate(idx);
        let (a, b) = self.cell_bounds(cell);
        let last = cell + 1 == self.cells();
        if u < a || u > b || (u == b && !last) {
            return 0.0;
        }
        self.eval_on_cell(cell, degree, u)
    }

    /// `[∫ w(u) phi_a(u) phi_b(u) du]` with `extra` additional Gauss points per
    /// cell on top of `quad_order` (for the degree of `w`).
    pub fn weighted_gram(&self, w: impl Fn(f64) -> f64, extra: usize) -> DMatrix<f64> {
        let m = self.size();
        let mut g = DMatrix::zeros(m, m);
        for cell in 0..self.cells() {
            let (a, b) = self.cell_bounds(cell);
            let (nodes, weights) = gauss_legendre_on(self.quad_order + extra, a, b);
            let base = cell * self.per_cell;
            for (u, wq) in nodes.iter().zip(&weights) {
                let vals: Vec<f64> = (0..self.per_cell).map(|d| self.eval_on_cell(cell, d, *u)).collect();
                let wu = wq * w(*u);
                for i in 0..self.per_cell {
                    for j in 0..self.per_cell {
                        g[(base + i, base + j)] += wu * vals[i] * vals[j];
                    }
                }
            }
        }
        g
    }

    pub fn gram(&self) -> DMatrix<f64> {
        self.weighted_gram(|_| 1.0, 0)
    }

    /// `max |G - I|` of the quadrature Gram matrix.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.gram();
        (g - DMatrix::identity(self.size(), self.size())).abs().max()
    }

    /// Coefficients `<f, phi_a>`, integrating `f` piecewise; `f` may vanish on whole cells.
    pub fn project(&self, f: impl Fn(f64) -> f64, extra: usize) -> DVector<f64> {
        let mut out = DVector::zeros(self.size());
        for cell in 0..self.cells() {
            let (a, b) = self.cell_bounds(cell);
            let (nodes, weights) = gauss_legendre_on(self.quad_order + extra, a, b);
            for (u, wq) in nodes.iter().zip(&weights) {
                let fu = f(*u) * wq;
                for d in 0..self.per_cell {
                    out[cell * self.per_cell + d] += fu * self.eval_on_cell(cell, d, *u);
                }
            }
        }
        out
    }

    /// `[∫∫ K(s, t) phi_a(s) phi_b(t) ds dt]` by a tensor Gauss rule with `q` points per cell.
    /// For a positive semidefinite kernel the result is positive semidefinite.
    pub fn kernel_matrix(&self, kernel: impl Fn(f64, f64) -> f64, q: usize) -> DMatrix<f64> {
        let mut pts = Vec::new();
        for cell in 0..self.cells() {
            let (a, b) = self.cell_bounds(cell);
            let (nodes, weights) = gauss_legendre_on(q, a, b);
            for (u, w) in nodes.into_iter().zip(weights) {
                pts.push((cell, u, w));
            }
        }
        let m = self.size();
        let phi = DMatrix::from_fn(m, pts.len(), |i, p| {
            let (cell, u, w) = pts[p];
            let (c, d) = self.locate(i);
            if c == cell {
                w * self.eval_on_cell(c, d, u)
            } else {
                0.0
            }
        });
        let k = DMatrix::from_fn(pts.len(), pts.len(), |i, j| kernel(pts[i].1, pts[j].1));
        let out = &phi * k * phi.transpose();
        (&out + out.transpose()) * 0.5
    }
}

/// Matrices of `f(u) -> u^j f(u)` in the orthonormal shifted-Legendre basis of size `m`.
pub fn galerkin_moment_operators(m: usize, degrees: &[usize]) -> Result<Vec<HermitianMatrix>> {
    if degrees.is_empty() {
        return Err(Error::Domain("at least one moment degree is required".into()));
    }
    let max_j = *degrees.iter().max().unwrap();
    // Integrand degree is 2(m - 1) + j; this many points integrates it exactly.
    let order = m + max_j.div_ceil(2) + 1;
    let basis = GalerkinBasis::shifted_legendre(m)?.with_quad_order(order);
    degrees
        .iter()
        .map(|&j| HermitianMatrix::from_real(&basis.weighted_gram(|u| u.powi(j as i32), 0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
                assert_abs_diff_eq!(got, want, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn moment_operator_examples() {
        let m = galerkin_moment_operators(1, &[1]).unwrap();
        assert_abs_diff_eq!(m[0].get(0, 0).re, 0.5, epsilon = 1e-15);
        // ∫ u * sqrt(3)(2u - 1) du = sqrt(3)/6
        let m = galerkin_moment_operators(2, &[1]).unwrap();
        assert_abs_diff_eq!(m[0].get(0, 1).re, 3f64.sqrt() / 6.0, epsilon = 1e-15);
        for size in [1, 3, 8] {
            let m = galerkin_moment_operators(size, &[0]).unwrap();
            let id = HermitianMatrix::identity(size, crate::Field::Real);
            assert!(crate::linalg::frobenius(&(m[0].as_matrix() - id.as_matrix())) < 1e-13);
        }
        assert!(galerkin_moment_operators(3, &[]).is_err());
        assert!(galerkin_moment_operators(0, &[1]).is_err());
    }

    #[test]
    fn piecewise_basis_is_orthonormal() {
        let b = GalerkinBasis::piecewise(vec![0.0, 0.3, 0.45, 1.0], 4).unwrap();
        assert_eq!(b.size(), 12);
        assert!(b.orthonormality_error() < 1e-12);
        assert!(GalerkinBasis::piecewise(vec![0.0, 0.5, 0.4, 1.0], 2).is_err());
        assert!(GalerkinBasis::shifted_legendre(7).unwrap().orthonormality_error() < 1e-12);
    }

    #[test]
    fn projection_recovers_basis_functions() {
        let b = GalerkinBasis::piecewise(vec![0.0, 0.5, 1.0], 3).unwrap();
        let coeffs = b.project(|u| b.eval(4, u), 0);
        for i in 0..b.size() {
            assert_abs_diff_eq!(coeffs[i], if i == 4 { 1.0 } else { 0.0 }, epsilon = 1e-13);
        }
    }
}
