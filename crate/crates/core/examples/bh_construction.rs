//! The (n; n+1, n+1) expansion family applied from `B(1)`, giving
//! `B(n^{2^{n-1}})`.
//!
//! cargo run --example bh_construction -- 4

use goodbox::capacity::{bh_bound, skeleton_to_certificate, verify_certificate};
use goodbox::constructions::{build_bh_skeleton, expansion_bh, verify_expansion, Limits};
use goodbox::verify_skeleton;

fn main() -> goodbox::Result<()> {
    let n: u32 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    for d in 1..n {
        let e = expansion_bh(d);
        println!(
            "({}; {}, {}) expansion: {:?}",
            e.a(),
            e.b(),
            e.c(),
            verify_expansion(&e)
        );
    }
    let s = build_bh_skeleton(n, &Limits::default())?;
    assert!(verify_skeleton(&s).is_accepted());
    let cert = skeleton_to_certificate(&s)?;
    assert!(verify_certificate(&cert).is_accepted());
    println!(
        "{}: {} points, certificate of size {}",
        s.shape(),
        s.len(),
        cert.len()
    );
    println!("bound {:.6}", bh_bound(n).value);
    Ok(())
}
