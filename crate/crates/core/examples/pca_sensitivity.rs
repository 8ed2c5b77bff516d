//! Largest `λ₁` consistent with restriction moments on an interval cover.
//!
//! The moments are generated from a Brownian-motion covariance, so the cover
//! bound has to sit at or above its top eigenvalue.

use extremal::applications::{max_lambda1_lowrank, pca_cover_constraints, CoverMeasurements, Lambda1Options};
use extremal::linalg::{eigh, HermitianMatrix};

fn main() -> extremal::error::Result<()> {
    let intervals = [(0.0, 0.6), (0.4, 1.0)];
    let p = 2;
    let meas = CoverMeasurements::new(&intervals, p, Some(3))?;
    let k = meas.basis.kernel_matrix(|s, t| s.min(t), 12);
    let planted = eigh(&HermitianMatrix::from_real(&k)?)?.max_eigenvalue();
    let (trace, moments) = meas.moments_of(&k);
    let cc = pca_cover_constraints(&intervals, p, trace, &moments, Some(3))?;
    println!(
        "{} constraints on a {}x{} operator, rank bound {}",
        cc.constraint_count,
        meas.size(),
        meas.size(),
        cc.rank_formula_bound
    );
    let res = max_lambda1_lowrank(&cc.spectrahedron, cc.rank_formula_bound, &Lambda1Options::default())?;
    println!("planted λ₁ {planted:.6}, worst case over the cover at least {:.6}", res.objective);
    for t in &res.traces {
        println!("  restart {} seed {} best {:?}", t.restart, t.seed, t.best);
    }
    Ok(())
}
