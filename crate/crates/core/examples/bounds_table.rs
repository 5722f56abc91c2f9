//! Lower bounds from good cubes against the doubling construction and the
//! theta upper bound, for n = 1..=12.
//!
//! cargo run --example bounds_table

use std::cmp::Ordering;

use goodbox::capacity::bounds_table;

fn main() {
    println!(
        "{:>3} {:>6} {:>12} {:>12} {:>12}  new vs BH",
        "n", "r", "lower", "bh", "theta"
    );
    for row in bounds_table(12) {
        let cmp = match row.lower_vs_bh {
            Ordering::Greater => ">",
            Ordering::Equal => "=",
            Ordering::Less => "<",
        };
        println!(
            "{:>3} {:>6} {:>12.9} {:>12.9} {:>12.9}  {cmp}",
            row.n, row.r, row.lower, row.bh, row.theta
        );
    }
}
