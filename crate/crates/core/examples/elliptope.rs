//! Elliptope extremality through the Hadamard square, against the general test.

use extremal::elliptope::{elliptope_extreme_test, random_correlation};
use extremal::extremality::{extremality_rank_test, ExtremalityOptions};
use extremal::linalg::Field;
use extremal::spectrahedron::elliptope;

fn main() -> extremal::error::Result<()> {
    let opts = ExtremalityOptions::default();
    for field in [Field::Real, Field::Complex] {
        let c = elliptope(6, field)?;
        for rank in 1..=4 {
            let p = random_correlation(6, rank, field, 9 + rank as u64)?;
            let fast = elliptope_extreme_test(&p, field, opts.tol)?;
            let slow = extremality_rank_test(p.matrix(), &c, &opts)?;
            println!(
                "{field:?} rank {rank}: Hadamard rank {} of {} -> extreme {} (general test {})",
                fast.gram_rank, fast.dim_x, fast.is_extreme, slow.is_extreme
            );
        }
    }
    Ok(())
}
