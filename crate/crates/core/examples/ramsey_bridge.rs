//! From the 65-point independent set in the 6th strong power of the
//! complement of C_9 to a verified 6-coloring of K_65.
//!
//! cargo run --release --example ramsey_bridge

use goodbox::capacity::{skeleton_to_certificate, verify_certificate};
use goodbox::constructions::{build_theorem_skeleton, Limits};
use goodbox::ramsey::{
    certificate_to_coloring, odd_girth, verify_coloring, verify_projection, ColoringVerdict,
};

fn main() -> goodbox::Result<()> {
    let build = build_theorem_skeleton(4, &Limits::default())?;
    let cert = skeleton_to_certificate(&build.skeleton)?;
    assert!(verify_certificate(&cert).is_accepted());

    let rc = certificate_to_coloring(&cert)?;
    for c in 1..=rc.k() {
        let g = rc.class_graph(c);
        println!(
            "color {c}: {} edges, odd girth {:?}",
            g.edge_count(),
            odd_girth(&g)
        );
    }
    verify_projection(&rc, &cert).expect("each class maps onto the cycle");
    match verify_coloring(&rc) {
        ColoringVerdict::Accepted(bound) => println!("{bound}"),
        ColoringVerdict::Rejected(why) => println!("rejected: {why}"),
    }
    Ok(())
}
