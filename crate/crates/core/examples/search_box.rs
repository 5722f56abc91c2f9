//! Decides whether a box is good by exhaustive search.
//!
//! cargo run --release --example search_box -- 2,3,5,8

use goodbox::format::skeleton_json;
use goodbox::search::{search_good, SearchOptions, Verdict};
use goodbox::BoxShape;

fn main() -> goodbox::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "2,3,4".into());
    let dims: Vec<u32> = arg
        .split(',')
        .map(|d| d.trim().parse().expect("dimension"))
        .collect();
    let opts = SearchOptions {
        symmetry: true,
        ..SearchOptions::default()
    };
    let out = search_good(&BoxShape::new(dims)?, &opts)?;
    println!("{out} in {:.3}s", out.stats.elapsed.as_secs_f64());
    if let Verdict::Good(s) = &out.verdict {
        print!("{}", skeleton_json(s));
    }
    Ok(())
}
