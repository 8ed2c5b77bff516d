//! Maximum rank of an extreme point for `m` constraints.

use extremal::extremality::bp_rank_bound;
use extremal::linalg::Field;

fn main() {
    println!("{:>3} {:>5} {:>8}", "m", "real", "complex");
    for m in [1, 2, 3, 4, 6, 9, 10, 16, 25] {
        println!("{m:>3} {:>5} {:>8}", bp_rank_bound(m, Field::Real), bp_rank_bound(m, Field::Complex));
    }
}
