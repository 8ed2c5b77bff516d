//! `rank(A ⊙ conj A)` against the `r²` bound and the diagonal spectrahedron.

use extremal::elliptope::hadamard_inequality_check;
use extremal::instances::{random_psd, seeded_rng};
use extremal::linalg::Field;

fn main() -> extremal::error::Result<()> {
    let mut rng = seeded_rng(12);
    for (n, r) in [(3, 2), (4, 2), (9, 3), (10, 3)] {
        for field in [Field::Real, Field::Complex] {
            let a = random_psd(n, r, field, &mut rng);
            let rep = hadamard_inequality_check(&a, field, 1e-8)?;
            println!(
                "n={n} rank {r} {field:?}: lhs {} <= {} (real bound {:?}), equality {}, extreme {}",
                rep.lhs_rank, rep.rhs_bound, rep.real_bound, rep.equality, rep.extreme_in_diagonal_spectrahedron
            );
        }
    }
    Ok(())
}
