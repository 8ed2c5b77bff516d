//! Rank-2 entropy minimization under three position moments.

use extremal::applications::{min_entropy_rank2, EntropyOptions};

fn main() -> extremal::error::Result<()> {
    for moments in [[0.5, 1.0 / 3.0, 0.25], [0.5, 0.3, 0.2]] {
        let res = min_entropy_rank2(moments, 8, &EntropyOptions::default())?;
        println!(
            "moments {:?}: alpha {:.4}, entropy {:.3e}, residual {:.2e}, converged {}",
            moments, res.alpha, res.entropy, res.max_residual, res.solve.converged
        );
    }
    Ok(())
}
