//! A non-extreme point comes with a segment `P ± H` inside the spectrahedron.

use extremal::extremality::{find_even_perturbation, ExtremalityOptions};
use extremal::linalg::{Field, HermitianMatrix};
use extremal::spectrahedron::{density, membership};

fn main() -> extremal::error::Result<()> {
    let c = density(3, Field::Complex)?;
    let p = HermitianMatrix::diagonal(Field::Complex, &[0.5, 0.5, 0.0]);
    let w = find_even_perturbation(&p, &c, &ExtremalityOptions::default())?.expect("mixed state");
    println!("||X|| = {:.3}, null space dimension {}", w.norm_x, w.null_space_dim);
    for t in [-1.0, -0.5, 0.5, 1.0] {
        let q = p.add(&w.h.scale(t))?;
        let m = membership(&c, &q, 1e-9)?;
        println!("t = {t:+.1}: feasible {}, min eigenvalue {:.3e}", m.feasible, m.min_eigenvalue);
    }
    Ok(())
}
