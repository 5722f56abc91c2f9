//! Builds the skeleton of `B(n^{r_n})` by repeated expansion and shrinking,
//! converts it to an independent set and prints the resulting bound.
//!
//! cargo run --example build_theorem -- 4

use goodbox::capacity::{lower_bound, skeleton_to_certificate, verify_certificate};
use goodbox::constructions::{build_theorem_skeleton, r, Limits};
use goodbox::verify_skeleton;

fn main() -> goodbox::Result<()> {
    let n: u32 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    let build = build_theorem_skeleton(n, &Limits::default())?;
    for b in &build.trace {
        println!("  {b}");
    }
    let s = &build.skeleton;
    println!(
        "r_{n} = {}, skeleton of {} with {} points",
        r(n),
        s.shape(),
        s.len()
    );
    assert!(verify_skeleton(s).is_accepted());

    let cert = skeleton_to_certificate(s)?;
    assert!(verify_certificate(&cert).is_accepted());
    let (bound, _) = lower_bound(s.k() as u64);
    println!(
        "independent set of size {} in the {}-th strong power of the complement of C_{}",
        cert.len(),
        cert.k(),
        cert.modulus()
    );
    println!("Shannon capacity >= {bound:.6}");
    Ok(())
}
