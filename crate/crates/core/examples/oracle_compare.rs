//! Rank test against the perturbation search on random instances.

use extremal::extremality::ExtremalityOptions;
use extremal::instances::run_oracle_comparison;

fn main() -> extremal::error::Result<()> {
    let s = run_oracle_comparison(500, 1, 8, &ExtremalityOptions::default())?;
    println!(
        "{} instances, {} extreme, {} agreements, {} disagreements",
        s.instances, s.extreme, s.agreements, s.disagreements
    );
    Ok(())
}
