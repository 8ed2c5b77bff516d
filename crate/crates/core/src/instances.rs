//! Seeded random instance families and the rank-test / witness comparison suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptope::random_correlation_with;
use crate::error::Result;
use crate::extremality::{
    bp_rank_bound, douglas_factor, extremality_rank_test, find_even_perturbation, ExtremalityOptions,
};
use crate::linalg::{frobenius, CMatrix, CVector, Field, HermitianMatrix, C64};
use crate::spectrahedron::{density, elliptope, membership, Constraint, Spectrahedron};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard Gaussian matrix; complex entries are `(x + iy)/sqrt(2)`.
pub fn gaussian_matrix(rows: usize, cols: usize, field: Field, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| match field {
        Field::Real => C64::new(rng.sample(StandardNormal), 0.0),
        Field::Complex => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            C64::new(s * rng.sample::<f64, _>(StandardNormal), s * rng.sample::<f64, _>(StandardNormal))
        }
    })
}

/// Haar-ish unitary (orthogonal for the real field) from the QR factor of a Gaussian matrix.
pub fn random_unitary(n: usize, field: Field, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian_matrix(n, n, field, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

pub fn random_hermitian(n: usize, field: Field, rng: &mut impl Rng) -> HermitianMatrix {
    let g = gaussian_matrix(n, n, field, rng);
    HermitianMatrix::symmetrized(field, (&g + g.adjoint()) * C64::new(0.5, 0.0))
}

/// `V V*` for Gaussian `V` of size `n x k`, scaled to unit trace.
pub fn random_psd(n: usize, k: usize, field: Field, rng: &mut impl Rng) -> HermitianMatrix {
    let v = gaussian_matrix(n, k, field, rng);
    let p = HermitianMatrix::gram_of_columns(field, &v).expect("nonempty factor");
    let t = p.trace();
    p.scale(1.0 / t)
}

/// Convex mixture of `k` random pure states with random positive weights.
pub fn density_mixture(n: usize, k: usize, field: Field, rng: &mut impl Rng) -> HermitianMatrix {
    let mut weights: Vec<f64> = (0..k).map(|_| 0.1 + rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut acc = CMatrix::zeros(n, n);
    for w in weights {
        let x = gaussian_matrix(n, 1, field, rng);
        let x: CVector = x.column(0).into_owned();
        let x = &x / C64::new(x.norm(), 0.0);
        acc += (&x * x.adjoint()) * C64::new(w, 0.0);
    }
    HermitianMatrix::symmetrized(field, acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Elliptope,
    Density,
    Custom,
    /// Custom constraints where some constraints are linear combinations of others.
    CustomRedundant,
}

/// A feasible point together with its spectrahedron.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub spectrahedron: Spectrahedron,
    pub point: HermitianMatrix,
    /// Rank the generator aimed for (exact-arithmetic rank of the point).
    pub planted_rank: usize,
}

fn custom_instance(n: usize, field: Field, redundant: bool, rng: &mut impl Rng) -> Instance {
    let k = rng.random_range(1..=n.min(3));
    let p = random_psd(n, k, field, rng);
    let m = rng.random_range(1..=10usize);
    let mut mats: Vec<HermitianMatrix> = (0..m).map(|_| random_hermitian(n, field, rng)).collect();
    if redundant && m >= 2 {
        // Replace the trailing constraints by combinations of the leading ones.
        let extra = rng.random_range(1..=m / 2);
        for idx in (m - extra)..m {
            let a = rng.random_range(0..(m - extra));
            let b = rng.random_range(0..(m - extra));
            let (s, t): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
            mats[idx] = mats[a].scale(s).add(&mats[b].scale(t)).expect("same size");
        }
    }
    let constraints = mats
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            let c = a.trace_product(&p);
            Constraint { label: Some(format!("A{i}")), a, c }
        })
        .collect();
    let family = if redundant { Family::CustomRedundant } else { Family::Custom };
    Instance {
        family,
        spectrahedron: Spectrahedron::new(field, n, constraints).expect("consistent sizes"),
        point: p,
        planted_rank: k,
    }
}

/// The `index`-th instance of the mixed oracle suite; deterministic in `(seed, index)`.
pub fn oracle_instance(seed: u64, index: usize, max_n: usize) -> Instance {
    let mut rng = seeded_rng(seed.wrapping_add(index as u64));
    let field = if rng.random::<bool>() { Field::Real } else { Field::Complex };
    let n = rng.random_range(1..=max_n.max(1));
    match index % 4 {
        0 => {
            let r = rng.random_range(1..=n);
            let p = random_correlation_with(n, r, field, &mut rng).expect("valid rank").into_inner();
            Instance { family: Family::Elliptope, spectrahedron: elliptope(n, field).unwrap(), point: p, planted_rank: r }
        }
        1 => {
            let k = rng.random_range(1..=4usize);
            let p = density_mixture(n, k, field, &mut rng);
            Instance { family: Family::Density, spectrahedron: density(n, field).unwrap(), point: p, planted_rank: k.min(n) }
        }
        2 => custom_instance(n, field, false, &mut rng),
        _ => custom_instance(n, field, true, &mut rng),
    }
}

/// Checks applied to a returned perturbation witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub plus_feasible: bool,
    pub minus_feasible: bool,
    pub norm_x: f64,
    pub range_residual: f64,
    /// `max_k |Tr(A_k H)| / scale_k`.
    pub max_scaled_constraint_value: f64,
    /// `||X_douglas - X||_F / ||X||_F`.
    pub douglas_relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub index: usize,
    pub family: Family,
    pub field: Field,
    pub n: usize,
    pub n_constraints: usize,
    pub planted_rank: usize,
    pub rank_p: usize,
    pub gram_rank: usize,
    pub dim_x: usize,
    pub rank_test_extreme: bool,
    pub witness_found: bool,
    pub agree: bool,
    pub bp_bound: usize,
    pub bp_respected: bool,
    pub witness: Option<WitnessCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub instances: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub extreme: usize,
    pub bp_violations: usize,
    pub records: Vec<OracleRecord>,
}

pub fn compare_instance(index: usize, inst: &Instance, opts: &ExtremalityOptions) -> Result<OracleRecord> {
    let c = &inst.spectrahedron;
    let rep = extremality_rank_test(&inst.point, c, opts)?;
    let witness = find_even_perturbation(&inst.point, c, opts)?;
    let check = match &witness {
        None => None,
        Some(w) => {
            let p = inst.point.with_field(c.field())?;
            let df = douglas_factor(&p, &w.h, opts.tol)?;
            let rel = frobenius(&(df.x.as_matrix() - w.x.as_matrix())) / w.x.frobenius_norm();
            let max_scaled = w
                .constraint_values(c)
                .iter()
                .zip(c.constraints())
                .map(|(v, con)| v.abs() / con.scale())
                .fold(0.0, f64::max);
            Some(WitnessCheck {
                plus_feasible: w.feasibility_plus.feasible,
                minus_feasible: w.feasibility_minus.feasible,
                norm_x: w.norm_x,
                range_residual: w.range_residual,
                max_scaled_constraint_value: max_scaled,
                douglas_relative_error: rel,
            })
        }
    };
    let bp_bound = bp_rank_bound(c.len(), c.field());
    Ok(OracleRecord {
        index,
        family: inst.family,
        field: c.field(),
        n: c.n(),
        n_constraints: c.len(),
        planted_rank: inst.planted_rank,
        rank_p: rep.rank_p,
        gram_rank: rep.gram_rank,
        dim_x: rep.dim_x,
        rank_test_extreme: rep.is_extreme,
        witness_found: witness.is_some(),
        agree: rep.is_extreme != witness.is_some(),
        bp_bound,
        bp_respected: !rep.is_extreme || rep.rank_p <= bp_bound,
        witness: check,
    })
}

/// Run the mixed suite over `count` instances, fanned out over threads.
/// Record order (and therefore the summary) is independent of scheduling.
pub fn run_oracle_comparison(count: usize, seed: u64, max_n: usize, opts: &ExtremalityOptions) -> Result<OracleSummary> {
    let records: Vec<OracleRecord> = (0..count)
        .into_par_iter()
        .map(|i| compare_instance(i, &oracle_instance(seed, i, max_n), opts))
        .collect::<Result<_>>()?;
    let agreements = records.iter().filter(|r| r.agree).count();
    Ok(OracleSummary {
        instances: count,
        agreements,
        disagreements: count - agreements,
        extreme: records.iter().filter(|r| r.rank_test_extreme).count(),
        bp_violations: records.iter().filter(|r| !r.bp_respected).count(),
        records,
    })
}

/// Sanity check used by tests: the point of every generated instance is feasible.
pub fn instance_is_feasible(inst: &Instance, tol: f64) -> bool {
    membership(&inst.spectrahedron, &inst.point, tol).map(|r| r.feasible).unwrap_or(false)
}
