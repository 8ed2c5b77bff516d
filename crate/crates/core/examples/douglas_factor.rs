//! Recover `X` from `H = √P X √P` when `range(H) ⊆ range(P)`.

use extremal::extremality::douglas_factor;
use extremal::instances::{random_hermitian, random_psd, seeded_rng};
use extremal::linalg::{psd_power, Field};

fn main() -> extremal::error::Result<()> {
    let mut rng = seeded_rng(4);
    let p = random_psd(5, 3, Field::Complex, &mut rng);
    let root = psd_power(&p, 0.5)?;
    let x = root.sandwich(&random_hermitian(5, Field::Complex, &mut rng))?;
    let h = root.sandwich(&x)?;
    let d = douglas_factor(&p, &h, 1e-9)?;
    println!("||X|| = {:.4}, reconstruction residual {:.2e}", d.operator_norm, d.reconstruction_residual);
    Ok(())
}
