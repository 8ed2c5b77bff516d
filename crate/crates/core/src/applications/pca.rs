//! Constraint sets for covariance operators known only through their
//! restrictions to overlapping subintervals of `[0, 1]`.
//!
//! On each interval `I_j` the first `p` normalized Legendre polynomials
//! `e_jk` are extended by zero to `[0, 1]`; the constraints fix `Tr P` and the
//! inner products `<P e_jk, e_jl>`. Everything is expressed in a global
//! piecewise-Legendre basis on the partition generated by the interval
//! endpoints, in which every `e_jk` is represented exactly.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::galerkin::{legendre, GalerkinBasis};
use crate::error::{Error, Result};
use crate::extremality::bp_rank_bound;
use crate::linalg::{Field, HermitianMatrix};
use crate::spectrahedron::{Constraint, Spectrahedron};

/// Moments keyed by `(interval j, k, l)`, all zero-based.
pub type RestrictionMoments = BTreeMap<(usize, usize, usize), f64>;

/// A serializable moment entry `beta_jkl = <P e_jk, e_jl>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEntry {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: f64,
}

pub fn moments_from_entries(entries: &[MomentEntry]) -> RestrictionMoments {
    entries.iter().map(|e| ((e.j, e.k, e.l), e.value)).collect()
}

/// Bases and constraint bookkeeping for one cover configuration.
#[derive(Clone, Debug)]
pub struct CoverMeasurements {
    pub intervals: Vec<(f64, f64)>,
    pub p: usize,
    pub basis: GalerkinBasis,
    /// `functions[j][k]`: coefficients of `e_jk` in the global basis.
    pub functions: Vec<Vec<DVector<f64>>>,
}

fn validate_cover(intervals: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if intervals.is_empty() {
        return Err(Error::Domain("at least one interval is required".into()));
    }
    for &(a, b) in intervals {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a >= b {
            return Err(Error::Domain(format!("interval [{a}, {b}] is not a subinterval of [0, 1]")));
        }
    }
    let mut sorted = intervals.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    if sorted[0].0 != 0.0 {
        return Err(Error::Domain("intervals do not cover 0".into()));
    }
    let mut reach = sorted[0].1;
    for &(a, b) in &sorted[1..] {
        if a >= reach {
            return Err(Error::Domain(format!("intervals do not overlap at {a}")));
        }
        reach = reach.max(b);
    }
    if reach != 1.0 {
        return Err(Error::Domain("intervals do not cover 1".into()));
    }
    Ok(sorted)
}

impl CoverMeasurements {
    /// `cell_degree` polynomials per partition cell (at least `p`; defaults to `p`).
    pub fn new(intervals: &[(f64, f64)], p: usize, cell_degree: Option<usize>) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("p must be at least 1".into()));
        }
        validate_cover(intervals)?;
        let per_cell = cell_degree.unwrap_or(p);
        if per_cell < p {
            return Err(Error::Domain(format!("cell degree {per_cell} cannot represent {p} functions per interval")));
        }
        let mut points: Vec<f64> = intervals.iter().flat_map(|&(a, b)| [a, b]).collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let basis = GalerkinBasis::piecewise(points, per_cell)?;
        let functions = intervals
            .iter()
            .map(|&(a, b)| {
                (0..p)
                    .map(|k| {
                        let h = b - a;
                        let f = move |u: f64| {
                            if u < a || u > b {
                                0.0
                            } else {
                                ((2 * k + 1) as f64 / h).sqrt() * legendre(k, 2.0 * (u - a) / h - 1.0)
                            }
                        };
                        basis.project(f, 0)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { intervals: intervals.to_vec(), p, basis, functions })
    }

    pub fn r(&self) -> usize {
        self.intervals.len()
    }

    pub fn size(&self) -> usize {
        self.basis.size()
    }

    /// `(beta_0, beta_jkl)` generated by a covariance matrix in the global basis.
    pub fn moments_of(&self, planted: &DMatrix<f64>) -> (f64, RestrictionMoments) {
        let mut moments = BTreeMap::new();
        for (j, fs) in self.functions.iter().enumerate() {
            for k in 0..self.p {
                for l in k..self.p {
                    moments.insert((j, k, l), fs[k].dot(&(planted * &fs[l])));
                }
            }
        }
        (planted.trace(), moments)
    }
}

/// Constraint set plus the rank bounds that go with it.
#[derive(Clone, Debug)]
pub struct CoverConstraints {
    pub spectrahedron: Spectrahedron,
    pub measurements: CoverMeasurements,
    /// Distinct constraints after merging `(k, l)` with `(l, k)`: `1 + r p (p + 1) / 2`.
    pub constraint_count: usize,
    /// Count before symmetrization: `1 + r p^2`.
    pub unsymmetrized_count: usize,
    /// `sqrt(2 r p^2 + 9/4) - 1/2`.
    pub rank_formula: f64,
    /// `floor(rank_formula)`.
    pub rank_formula_bound: usize,
    /// Rank bound from the symmetrized count.
    pub count_rank_bound: usize,
}

pub fn rank_formula(r: usize, p: usize) -> f64 {
    (2.0 * (r * p * p) as f64 + 2.25).sqrt() - 0.5
}

fn lookup(moments: &RestrictionMoments, j: usize, k: usize, l: usize) -> Result<f64> {
    match (moments.get(&(j, k, l)), moments.get(&(j, l, k))) {
        (Some(a), Some(b)) if k != l => Ok(0.5 * (a + b)),
        (Some(a), _) | (None, Some(a)) => Ok(*a),
        (None, None) => Err(Error::Domain(format!("missing restriction moment for interval {j}, k = {k}, l = {l}"))),
    }
}

/// `{(I, beta_0)} ∪ {(sym(e_jk ⊗ e_jl), beta_jkl) : k <= l}` in the global basis.
pub fn pca_cover_constraints(
    intervals: &[(f64, f64)],
    p: usize,
    trace_target: f64,
    moments: &RestrictionMoments,
    cell_degree: Option<usize>,
) -> Result<CoverConstraints> {
    let meas = CoverMeasurements::new(intervals, p, cell_degree)?;
    let m = meas.size();
    let mut constraints =
        vec![Constraint { label: Some("trace".into()), a: HermitianMatrix::identity(m, Field::Real), c: trace_target }];
    for (j, fs) in meas.functions.iter().enumerate() {
        for k in 0..p {
            for l in k..p {
                let outer = &fs[k] * fs[l].transpose();
                let sym = (&outer + outer.transpose()) * 0.5;
                constraints.push(Constraint {
                    label: Some(format!("I{j}:k{k}:l{l}")),
                    a: HermitianMatrix::from_real(&sym)?,
                    c: lookup(moments, j, k, l)?,
                });
            }
        }
    }
    let constraint_count = constraints.len();
    let r = meas.r();
    let formula = rank_formula(r, p);
    Ok(CoverConstraints {
        spectrahedron: Spectrahedron::new(Field::Real, m, constraints)?,
        constraint_count,
        unsymmetrized_count: 1 + r * p * p,
        rank_formula: formula,
        rank_formula_bound: formula.floor() as usize,
        count_rank_bound: bp_rank_bound(constraint_count, Field::Real),
        measurements: meas,
    })
}
