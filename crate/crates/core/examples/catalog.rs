//! Maximal good boxes of dimension k, with downward-closure pruning.
//!
//! cargo run --release --example catalog -- 3

use goodbox::search::{maximal_good_boxes, Decision, SearchOptions};

fn main() -> goodbox::Result<()> {
    let k: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);
    let cap = (1u32 << (k - 1)) + 1;
    let opts = SearchOptions {
        symmetry: true,
        ..SearchOptions::default()
    };
    let c = maximal_good_boxes(k, cap, &opts)?;
    for (b, d) in &c.decisions {
        if let Decision::Searched { good, nodes } = d {
            println!("  searched {b}: good={good} ({nodes} nodes)");
        }
    }
    println!("maximal good boxes for k = {k}:");
    for b in &c.maximal {
        println!("  {b}");
    }
    Ok(())
}
