//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use extremal::applications::entropy::{min_entropy_rank2, EntropyOptions};
use extremal::applications::lambda1::{max_lambda1_lowrank, Lambda1Options};
use extremal::applications::pca::{pca_cover_constraints, CoverMeasurements};
use extremal::elliptope::{hadamard_inequality_check, hadamard_square, random_correlation_with};
use extremal::extremality::{
    bp_rank_bound, extremality_rank_test, find_even_perturbation, perturbation_gram, ExtremalityOptions,
};
use extremal::instances::{density_mixture, random_psd, run_oracle_comparison, seeded_rng, Family, OracleSummary};
use extremal::linalg::{eigh, numerical_rank, Field, HermitianMatrix};
use extremal::spectrahedron::{density, elliptope, membership};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

const FIELDS: [Field; 2] = [Field::Real, Field::Complex];

/// Shared by criteria 1 and 6: extreme-certified points that exceed the rank bound.
struct DensityRun {
    outcome: Outcome,
    bp_violations: usize,
}

fn density_law() -> DensityRun {
    let start = Instant::now();
    let opts = ExtremalityOptions::default();
    let (mut total, mut disagreements, mut pure, mut bp_violations) = (0, 0, 0, 0);
    for field in FIELDS {
        let c_cache: Vec<_> = (2..=8).map(|n| density(n, field).unwrap()).collect();
        for n in 2..=8usize {
            let mut rng = seeded_rng(1000 + n as u64 + if field == Field::Complex { 100 } else { 0 });
            for i in 0..50 {
                let k = i % 4 + 1;
                let p = density_mixture(n, k, field, &mut rng);
                let c = &c_cache[n - 2];
                let rep = extremality_rank_test(&p, c, &opts).unwrap();
                let rank_one = numerical_rank(&p, None).unwrap().rank == 1;
                total += 1;
                pure += rank_one as usize;
                if rep.is_extreme != rank_one || rank_one != (k == 1) {
                    disagreements += 1;
                }
                if rep.is_extreme && rep.rank_p > bp_rank_bound(c.len(), field) {
                    bp_violations += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    DensityRun {
        outcome: outcome(
            disagreements == 0 && elapsed < Duration::from_secs(10),
            format!("{total} points, {pure} pure, {disagreements} disagreements, {:.2} s", elapsed.as_secs_f64()),
        ),
        bp_violations,
    }
}

fn oracle_equivalence() -> (Outcome, OracleSummary) {
    let start = Instant::now();
    let s = run_oracle_comparison(1200, 2024, 8, &ExtremalityOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let families = [Family::Elliptope, Family::Density, Family::Custom, Family::CustomRedundant]
        .iter()
        .all(|f| s.records.iter().any(|r| r.family == *f));
    let fields = FIELDS.iter().all(|f| s.records.iter().any(|r| r.field == *f));
    let max_n = s.records.iter().map(|r| r.n).max().unwrap_or(0);
    let pass =
        s.instances >= 1000 && s.disagreements == 0 && families && fields && max_n <= 8 && elapsed < Duration::from_secs(60);
    (
        outcome(
            pass,
            format!(
                "{} instances, {} extreme, {} disagreements, {:.2} s",
                s.instances,
                s.extreme,
                s.disagreements,
                elapsed.as_secs_f64()
            ),
        ),
        s,
    )
}

fn elliptope_identity() -> Outcome {
    let mut rng = seeded_rng(31);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=8usize);
        let r = rng.random_range(1..=n);
        let p = random_correlation_with(n, r, Field::Real, &mut rng).unwrap().into_inner();
        let g = perturbation_gram(&p, &elliptope(n, Field::Real).unwrap()).unwrap();
        let sq = hadamard_square(&p.clone().into());
        for i in 0..n {
            for j in 0..n {
                let z = sq.as_matrix()[(i, j)];
                worst = worst.max((g[(i, j)] - z.re).abs()).max(z.im.abs());
            }
        }
    }
    outcome(worst <= 1e-10, format!("200 matrices, max deviation {worst:.2e}"))
}

fn trine_and_identity() -> Outcome {
    let opts = ExtremalityOptions::default();
    let c = elliptope(3, Field::Real).unwrap();
    let trine = HermitianMatrix::from_real_rows(&[
        vec![1.0, -0.5, -0.5],
        vec![-0.5, 1.0, -0.5],
        vec![-0.5, -0.5, 1.0],
    ])
    .unwrap();
    let t = extremality_rank_test(&trine, &c, &opts).unwrap();
    let tw = find_even_perturbation(&trine, &c, &opts).unwrap();
    let id = HermitianMatrix::identity(3, Field::Real);
    let i = extremality_rank_test(&id, &c, &opts).unwrap();
    let iw = find_even_perturbation(&id, &c, &opts).unwrap();
    let pass = t.is_extreme
        && t.rank_p == 2
        && t.gram_rank == 3
        && t.dim_x == 3
        && tw.is_none()
        && !i.is_extreme
        && i.dim_x == 6
        && i.gram_rank == 3
        && i.facial_dimension == 3
        && iw.is_some();
    outcome(
        pass,
        format!(
            "trine rank {} gram {} dim {}; I_3 dim {} gram {} face {}",
            t.rank_p, t.gram_rank, t.dim_x, i.dim_x, i.gram_rank, i.facial_dimension
        ),
    )
}

fn witness_feasibility(s: &OracleSummary) -> Outcome {
    let witnesses: Vec<_> = s.records.iter().filter_map(|r| r.witness.as_ref()).collect();
    let non_extreme = s.records.iter().filter(|r| !r.rank_test_extreme).count();
    let bad = witnesses
        .iter()
        .filter(|w| !(w.plus_feasible && w.minus_feasible && w.norm_x <= 0.5 + 1e-10 && w.douglas_relative_error <= 1e-8))
        .count();
    let worst_norm = witnesses.iter().map(|w| w.norm_x).fold(0.0, f64::max);
    let worst_douglas = witnesses.iter().map(|w| w.douglas_relative_error).fold(0.0, f64::max);
    outcome(
        bad == 0 && witnesses.len() == non_extreme && !witnesses.is_empty(),
        format!(
            "{} witnesses, {bad} invalid, max ||X|| {worst_norm:.3}, max Douglas error {worst_douglas:.2e}",
            witnesses.len()
        ),
    )
}

fn bp_bounds(density_violations: usize, s: &OracleSummary) -> Outcome {
    let b = bp_rank_bound(4, Field::Complex);
    outcome(
        b == 2 && density_violations == 0 && s.bp_violations == 0,
        format!("bp(4, complex) = {b}, violations {density_violations} + {}", s.bp_violations),
    )
}

fn hadamard_inequality() -> Outcome {
    let tol = 1e-8;
    let opts = ExtremalityOptions::default();
    let mut violations = 0;
    let mut mismatches = 0;
    let mut equalities = 0;
    for field in FIELDS {
        let mut rng = seeded_rng(if field == Field::Real { 71 } else { 72 });
        for i in 0..500 {
            let r = i % 4 + 1;
            let n = rng.random_range(r..=10);
            let a = random_psd(n, r, field, &mut rng);
            let rep = hadamard_inequality_check(&a, field, tol).unwrap();
            if rep.rank != r || rep.lhs_rank > r * r || (field == Field::Real && rep.lhs_rank > r * (r + 1) / 2) {
                violations += 1;
            }
            let c = extremal::elliptope::diagonal_spectrahedron(
                &(0..n).map(|j| a.get(j, j).re).collect::<Vec<_>>(),
                Field::Complex,
            )
            .unwrap();
            let ac = a.with_field(Field::Complex).unwrap();
            let witness = find_even_perturbation(&ac, &c, &opts).unwrap();
            if rep.equality != rep.extreme_in_diagonal_spectrahedron || rep.equality != witness.is_none() {
                mismatches += 1;
            }
            equalities += rep.equality as usize;
        }
    }
    outcome(
        violations == 0 && mismatches == 0,
        format!("1000 matrices, {violations} bound violations, {mismatches} mismatches, {equalities} equalities"),
    )
}

fn entropy_study() -> Outcome {
    let start = Instant::now();
    let res = min_entropy_rank2([0.5, 1.0 / 3.0, 0.25], 8, &EntropyOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let moment = res.moment_residuals.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let pass = res.entropy <= 1e-4 && moment <= 1e-6 && res.max_residual <= 1e-6 && elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "entropy {:.2e}, moment residual {moment:.2e}, max residual {:.2e}, {:.2} s",
            res.entropy,
            res.max_residual,
            elapsed.as_secs_f64()
        ),
    )
}

fn lambda1_study() -> Outcome {
    let opts = Lambda1Options::default();
    let e2 = max_lambda1_lowrank(&elliptope(2, Field::Real).unwrap(), 1, &opts).unwrap();

    let (r, p) = (2usize, 2usize);
    let intervals = [(0.0, 0.6), (0.4, 1.0)];
    let meas = CoverMeasurements::new(&intervals, p, Some(3)).unwrap();
    let planted = meas.basis.kernel_matrix(|s, t| s.min(t), 12);
    let planted_l1 = eigh(&HermitianMatrix::from_real(&planted).unwrap()).unwrap().max_eigenvalue();
    let (trace, moments) = meas.moments_of(&planted);
    let cc = pca_cover_constraints(&intervals, p, trace, &moments, Some(3)).unwrap();
    let expected_bound = ((2.0 * (r * p * p) as f64 + 2.25).sqrt() - 0.5).floor() as usize;
    let toy = max_lambda1_lowrank(&cc.spectrahedron, cc.rank_formula_bound, &opts).unwrap();
    let recheck = membership(&cc.spectrahedron, &toy.p_opt, opts.tol).unwrap();
    let pass = e2.objective >= 2.0 - 1e-6
        && e2.membership.feasible
        && toy.objective >= planted_l1 - 1e-6
        && recheck.feasible
        && cc.rank_formula_bound == expected_bound
        && toy.rank_bound_used == expected_bound;
    outcome(
        pass,
        format!(
            "elliptope(2) {:.9}; cover bound {:.6} vs planted {:.6}; rank bound {} (expected {expected_bound})",
            e2.objective, toy.objective, planted_l1, cc.rank_formula_bound
        ),
    )
}

fn main() {
    let density = density_law();
    let (oracle, summary) = oracle_equivalence();
    let results = [
        ("density-operator law", density.outcome),
        ("oracle equivalence", oracle),
        ("elliptope identity", elliptope_identity()),
        ("trine extremality", trine_and_identity()),
        ("witness feasibility", witness_feasibility(&summary)),
        ("rank bounds", bp_bounds(density.bp_violations, &summary)),
        ("Hadamard rank inequality", hadamard_inequality()),
        ("quantum entropy study", entropy_study()),
        ("lambda_1 study", lambda1_study()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {} {:<26} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += (!o.pass) as usize;
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
