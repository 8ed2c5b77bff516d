//! Rank test on a few points of the 3x3 elliptope.

use extremal::extremality::{extremality_rank_test, ExtremalityOptions};
use extremal::linalg::{Field, HermitianMatrix};
use extremal::spectrahedron::elliptope;

fn main() -> extremal::error::Result<()> {
    let c = elliptope(3, Field::Real)?;
    let opts = ExtremalityOptions::default();
    let points = [
        ("all ones", HermitianMatrix::from_real_rows(&[vec![1.0; 3], vec![1.0; 3], vec![1.0; 3]])?),
        (
            "trine",
            HermitianMatrix::from_real_rows(&[vec![1.0, -0.5, -0.5], vec![-0.5, 1.0, -0.5], vec![-0.5, -0.5, 1.0]])?,
        ),
        ("identity", HermitianMatrix::identity(3, Field::Real)),
    ];
    for (name, p) in &points {
        let r = extremality_rank_test(p, &c, &opts)?;
        println!(
            "{name:>9}: rank {} gram rank {} of {} -> extreme {} (face dimension {})",
            r.rank_p, r.gram_rank, r.dim_x, r.is_extreme, r.facial_dimension
        );
    }
    Ok(())
}
