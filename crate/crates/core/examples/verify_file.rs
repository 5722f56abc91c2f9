//! Reads any certificate file and runs the matching verifier.
//!
//! cargo run --example verify_file -- path/to/cert.json

use goodbox::capacity::verify_certificate;
use goodbox::constructions::verify_expansion;
use goodbox::format::{read_certificate, Certificate};
use goodbox::ramsey::verify_coloring;
use goodbox::verify_skeleton;

fn main() -> goodbox::Result<()> {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: verify_file <certificate.json>");
        std::process::exit(2);
    };
    let cert = read_certificate(path.as_ref())?;
    let verdict = match &cert {
        Certificate::Skeleton(s) => format!("{:?}", verify_skeleton(s)),
        Certificate::Expansion(e) => format!("{:?}", verify_expansion(e)),
        Certificate::IndependentSet(c) => format!("{:?}", verify_certificate(c)),
        Certificate::RamseyColoring(rc) => format!("{:?}", verify_coloring(rc)),
    };
    println!("{}: {verdict}", cert.type_name());
    Ok(())
}
