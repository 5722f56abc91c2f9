//! Command-line front end.
//!
//! Exit codes: 0 success / accepted / Good, 1 rejected / NotGood,
//! 2 invalid input (including unreadable or malformed files), 3 search budget
//! exhausted. Results go to standard output, diagnostics to standard error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::capacity::{
    bh_bound, bound_report, bounds_csv, bounds_table, skeleton_to_certificate, verify_certificate,
    CertificateVerdict, IndependenceCertificate,
};
use crate::constructions::{
    add_dimension, apply_expansion, build_bh_skeleton, build_theorem_skeleton, expansion_bh,
    expansion_ex, r, remove_dimension, shrink, verify_expansion, ExpansionTable, ExpansionVerdict,
    Limits,
};
use crate::error::{invalid, Result};
use crate::format::{
    coloring_json, expansion_json, independent_set_json, read_certificate, skeleton_json,
    Certificate,
};
use crate::ramsey::{certificate_to_coloring, verify_coloring, verify_projection, ColoringVerdict};
use crate::search::{maximal_good_boxes, search_good, SearchOptions, Verdict};
use crate::skeleton::{verify_skeleton, BoxShape, Skeleton, SkeletonVerdict};

pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "goodbox",
    version,
    about = "Good boxes, skeleton certificates and the bounds they give"
)]
pub struct RunConfig {
    /// Worker threads for search and verification (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Leave timings out of the output so identical runs print identical text.
    #[arg(long, global = true)]
    pub deterministic: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print r_n, the number of partitions of 2(n-1) into powers of two.
    Rn { n: u32 },

    /// Build the skeleton of B(n^r), its independent set and a bound report.
    Build {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Theorem)]
        method: Method,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Refuse to build skeletons with more points than this.
        #[arg(long, default_value_t = Limits::DEFAULT_MAX_POINTS)]
        max_points: u64,
    },

    /// Verify a certificate file of any type.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },

    /// Decide whether a box is good.
    Search {
        /// Dimensions, comma separated, e.g. 2,3,5.
        #[arg(long = "box", value_name = "DIMS")]
        dims: String,
        /// Maximum number of candidate placements.
        #[arg(long)]
        budget: Option<u64>,
        /// Where to write the skeleton when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Search one skeleton per orbit under axis reflections and
        /// permutations of equal dimensions.
        #[arg(long)]
        symmetry: bool,
    },

    /// List the maximal good boxes of dimension k.
    Catalog {
        #[arg(long)]
        k: usize,
        /// Largest dimension enumerated; defaults to 2^(k-1) + 1.
        #[arg(long)]
        cap: Option<u32>,
        /// Node budget for each box searched.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Search one skeleton per symmetry orbit (see `search`).
        #[arg(long)]
        symmetry: bool,
    },

    /// CSV of lower bound, BH bound and theta for n = 1..=nmax.
    Bounds {
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Turn an independent set (or skeleton) into a verified edge coloring.
    Ramsey {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Shrink coordinate `coord` (0-based) of a skeleton by one.
    Shrink {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        coord: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Apply an expansion to coordinate `coord` (0-based) of a skeleton.
    Expand {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        coord: usize,
        /// Built-in expansion family sized to the coordinate.
        #[arg(long, conflicts_with = "table")]
        family: Option<Family>,
        /// Expansion table file.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Append a dimension of size `n`; the new skeleton is S x {1, 2}.
    AddDim {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Drop coordinate `coord` (0-based), whose size must exceed 2^(k-1).
    RemoveDim {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        coord: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Write a built-in expansion table.
    Table {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Theorem,
    Bh,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// (n; n+1, 2n)
    Ex,
    /// (n; n+1, n+1)
    Bh,
}

impl Family {
    fn table(self, a: u32) -> ExpansionTable {
        match self {
            Family::Ex => expansion_ex(a),
            Family::Bh => expansion_bh(a),
        }
    }
}

/// Runs one invocation and returns its exit code.
pub fn run(cfg: &RunConfig) -> u8 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return EXIT_INVALID;
        }
    };
    match pool.install(|| dispatch(cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn dispatch(cfg: &RunConfig) -> Result<u8> {
    match &cfg.command {
        Command::Rn { n } => {
            if *n == 0 {
                return Err(invalid("n must be >= 1"));
            }
            println!("{}", r(*n));
            Ok(EXIT_OK)
        }
        Command::Build {
            n,
            method,
            out_dir,
            max_points,
        } => build(
            *n,
            *method,
            out_dir,
            Limits {
                max_points: *max_points,
            },
        ),
        Command::Verify { cert } => verify(cert),
        Command::Search {
            dims,
            budget,
            out,
            symmetry,
        } => search(cfg, dims, *budget, out.as_deref(), *symmetry),
        Command::Catalog {
            k,
            cap,
            budget,
            out,
            symmetry,
        } => catalog(cfg, *k, *cap, *budget, out.as_deref(), *symmetry),
        Command::Bounds { nmax, out } => {
            if *nmax == 0 {
                return Err(invalid("nmax must be >= 1"));
            }
            emit(out.as_deref(), &bounds_csv(&bounds_table(*nmax)))?;
            Ok(EXIT_OK)
        }
        Command::Ramsey { cert, out } => ramsey(cert, out.as_deref()),
        Command::Shrink { cert, coord, out } => {
            compose(cert, out.as_deref(), |s| shrink(s, *coord))
        }
        Command::Expand {
            cert,
            coord,
            family,
            table,
            out,
        } => {
            let table = match (family, table) {
                (_, Some(path)) => match read_certificate(path)? {
                    Certificate::Expansion(e) => Some(e),
                    other => {
                        return Err(invalid(format!(
                            "{}: expected an expansion table, found {}",
                            path.display(),
                            other.type_name()
                        )))
                    }
                },
                (Some(_), None) => None,
                (None, None) => return Err(invalid("expand needs --family or --table")),
            };
            if let Some(e) = &table {
                if let ExpansionVerdict::Rejected(v) = verify_expansion(e) {
                    eprintln!("expansion table rejected: {v}");
                    return Ok(EXIT_REJECTED);
                }
            }
            let family = *family;
            compose(cert, out.as_deref(), |s| {
                let e = match &table {
                    Some(e) => e.clone(),
                    None => {
                        let a = *s.shape().dims().get(*coord).ok_or_else(|| {
                            invalid(format!("coordinate {coord} out of range for {}", s.shape()))
                        })?;
                        family.expect("checked above").table(a)
                    }
                };
                apply_expansion(s, *coord, &e)
            })
        }
        Command::AddDim { cert, n, out } => compose(cert, out.as_deref(), |s| add_dimension(s, *n)),
        Command::RemoveDim { cert, coord, out } => {
            compose(cert, out.as_deref(), |s| remove_dimension(s, *coord))
        }
        Command::Table { family, a, out } => {
            if *a == 0 {
                return Err(invalid("a must be >= 1"));
            }
            emit(out.as_deref(), &expansion_json(&family.table(*a)))?;
            Ok(EXIT_OK)
        }
    }
}

/// Writes `text` to `out`, or to standard output when no path is given.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn build(n: u32, method: Method, out_dir: &Path, limits: Limits) -> Result<u8> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    let (skeleton, prefix) = match method {
        Method::Theorem => (build_theorem_skeleton(n, &limits)?.skeleton, "theorem"),
        Method::Bh => (build_bh_skeleton(n, &limits)?, "bh"),
    };
    if let SkeletonVerdict::Rejected(v) = verify_skeleton(&skeleton) {
        eprintln!("built skeleton rejected: {v}");
        return Ok(EXIT_REJECTED);
    }
    let cert = skeleton_to_certificate(&skeleton)?;
    if let CertificateVerdict::Rejected { a, b } = verify_certificate(&cert) {
        eprintln!("independent set rejected: {a:?} and {b:?} are adjacent");
        return Ok(EXIT_REJECTED);
    }

    fs::create_dir_all(out_dir)?;
    let skel_path = out_dir.join(format!("{prefix}-skeleton-n{n}.json"));
    let cert_path = out_dir.join(format!("{prefix}-independent-set-n{n}.json"));
    let report_path = out_dir.join(format!("{prefix}-report-n{n}.txt"));
    fs::write(&skel_path, skeleton_json(&skeleton))?;
    fs::write(&cert_path, independent_set_json(&cert))?;
    let report = build_report(n, method, &skeleton, &cert);
    fs::write(&report_path, &report)?;
    print!("{report}");
    for p in [&skel_path, &cert_path, &report_path] {
        eprintln!("wrote {}", p.display());
    }
    Ok(EXIT_OK)
}

fn build_report(n: u32, method: Method, s: &Skeleton, c: &IndependenceCertificate) -> String {
    let k = s.k();
    let bound = crate::capacity::lower_bound(k as u64).0;
    let row = bound_report(n);
    let mut out = String::new();
    out.push_str(&format!("method: {method:?}\n").to_lowercase());
    out.push_str(&format!("box: {}\n", s.shape()));
    out.push_str(&format!("skeleton points: {}\n", s.len()));
    out.push_str(&format!(
        "independent set: {} points in strong power {k} of the complement of C_{}\n",
        c.len(),
        c.modulus()
    ));
    out.push_str(&format!(
        "lower bound: ({})^(1/{k}) = {bound:.9}\n",
        c.len()
    ));
    let bh = bh_bound(n);
    out.push_str(&format!(
        "bh bound: (2^{e} + 1)^(1/{e}) = {:.9}\n",
        bh.value,
        e = 1u64 << (n - 1).min(63)
    ));
    out.push_str(&format!("theta: {:.9}\n", row.theta));
    out
}

fn verify(path: &Path) -> Result<u8> {
    let cert = read_certificate(path)?;
    let (ok, msg) = match &cert {
        Certificate::Skeleton(s) => match verify_skeleton(s) {
            SkeletonVerdict::Accepted => (
                true,
                format!("skeleton of {} with {} points", s.shape(), s.len()),
            ),
            SkeletonVerdict::Rejected(v) => (false, v.to_string()),
        },
        Certificate::Expansion(e) => match verify_expansion(e) {
            ExpansionVerdict::Accepted => {
                (true, format!("({}; {}, {})-expansion", e.a(), e.b(), e.c()))
            }
            ExpansionVerdict::Rejected(v) => (false, v.to_string()),
        },
        Certificate::IndependentSet(c) => match verify_certificate(c) {
            CertificateVerdict::Accepted => (
                true,
                format!(
                    "{} independent points in strong power {} of the complement of C_{}",
                    c.len(),
                    c.k(),
                    c.modulus()
                ),
            ),
            CertificateVerdict::Rejected { a, b } => {
                (false, format!("{a:?} and {b:?} are adjacent"))
            }
        },
        Certificate::RamseyColoring(rc) => match verify_coloring(rc) {
            ColoringVerdict::Accepted(bound) => (true, bound.to_string()),
            ColoringVerdict::Rejected(v) => (false, v.to_string()),
        },
    };
    if ok {
        println!("accepted {}: {msg}", cert.type_name());
        Ok(EXIT_OK)
    } else {
        println!("rejected {}: {msg}", cert.type_name());
        Ok(EXIT_REJECTED)
    }
}

fn parse_dims(text: &str) -> Result<BoxShape> {
    let dims = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| invalid(format!("bad dimension {t:?} in --box: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    BoxShape::new(dims)
}

fn search(
    cfg: &RunConfig,
    dims: &str,
    budget: Option<u64>,
    out: Option<&Path>,
    symmetry: bool,
) -> Result<u8> {
    let shape = parse_dims(dims)?;
    let opts = SearchOptions {
        budget,
        symmetry,
        ..SearchOptions::default()
    };
    let outcome = search_good(&shape, &opts)?;
    if cfg.deterministic {
        println!("{outcome}");
    } else {
        println!(
            "{outcome} elapsed={:.3}s",
            outcome.stats.elapsed.as_secs_f64()
        );
    }
    Ok(match &outcome.verdict {
        Verdict::Good(s) => {
            if let Some(path) = out {
                fs::write(path, skeleton_json(s))?;
                eprintln!("wrote {}", path.display());
            }
            EXIT_OK
        }
        Verdict::NotGood => EXIT_REJECTED,
        Verdict::Exhausted { .. } => EXIT_EXHAUSTED,
    })
}

fn catalog(
    cfg: &RunConfig,
    k: usize,
    cap: Option<u32>,
    budget: Option<u64>,
    out: Option<&Path>,
    symmetry: bool,
) -> Result<u8> {
    if k == 0 || k > 16 {
        return Err(invalid(format!("k = {k} outside 1..=16")));
    }
    let cap = cap.unwrap_or((1u32 << (k - 1)) + 1);
    let started = std::time::Instant::now();
    let opts = SearchOptions {
        budget,
        symmetry,
        ..SearchOptions::default()
    };
    let c = maximal_good_boxes(k, cap, &opts)?;
    let mut text = String::new();
    for b in &c.maximal {
        text.push_str(&format!("{b}\n"));
    }
    emit(out, &text)?;
    let searched = c.searched().count();
    if cfg.deterministic {
        eprintln!(
            "{} boxes decided, {searched} searched, {} nodes",
            c.decisions.len(),
            c.nodes
        );
    } else {
        eprintln!(
            "{} boxes decided, {searched} searched, {} nodes, {:.3}s",
            c.decisions.len(),
            c.nodes,
            started.elapsed().as_secs_f64()
        );
    }
    if c.is_complete() {
        Ok(EXIT_OK)
    } else {
        eprintln!("budget exhausted on some boxes; the listing is incomplete");
        Ok(EXIT_EXHAUSTED)
    }
}

fn ramsey(path: &Path, out: Option<&Path>) -> Result<u8> {
    let cert = match read_certificate(path)? {
        Certificate::IndependentSet(c) => c,
        Certificate::Skeleton(s) => {
            if let SkeletonVerdict::Rejected(v) = verify_skeleton(&s) {
                println!("rejected skeleton: {v}");
                return Ok(EXIT_REJECTED);
            }
            skeleton_to_certificate(&s)?
        }
        other => {
            return Err(invalid(format!(
                "{}: expected an independent-set or skeleton certificate, found {}",
                path.display(),
                other.type_name()
            )))
        }
    };
    if let CertificateVerdict::Rejected { a, b } = verify_certificate(&cert) {
        println!("rejected independent-set: {a:?} and {b:?} are adjacent");
        return Ok(EXIT_REJECTED);
    }
    let rc = certificate_to_coloring(&cert)?;
    if let Err((u, v, c)) = verify_projection(&rc, &cert) {
        println!(
            "rejected ramsey-coloring: edge ({u},{v}) of color {c} does not project to C_{}",
            cert.modulus()
        );
        return Ok(EXIT_REJECTED);
    }
    match verify_coloring(&rc) {
        ColoringVerdict::Accepted(bound) => {
            emit(out, &coloring_json(&rc))?;
            if out.is_some() {
                println!("{bound}");
            } else {
                eprintln!("{bound}");
            }
            Ok(EXIT_OK)
        }
        ColoringVerdict::Rejected(v) => {
            println!("rejected ramsey-coloring: {v}");
            Ok(EXIT_REJECTED)
        }
    }
}

/// Reads and verifies a skeleton, applies `step`, re-verifies and writes the
/// (canonicalized) result.
fn compose(
    path: &Path,
    out: Option<&Path>,
    step: impl FnOnce(&Skeleton) -> Result<Skeleton>,
) -> Result<u8> {
    let s = match read_certificate(path)? {
        Certificate::Skeleton(s) => s,
        other => {
            return Err(invalid(format!(
                "{}: expected a skeleton, found {}",
                path.display(),
                other.type_name()
            )))
        }
    };
    if let SkeletonVerdict::Rejected(v) = verify_skeleton(&s) {
        eprintln!("input skeleton rejected: {v}");
        return Ok(EXIT_REJECTED);
    }
    let next = step(&s)?;
    if let SkeletonVerdict::Rejected(v) = verify_skeleton(&next) {
        eprintln!("result rejected: {v}");
        return Ok(EXIT_REJECTED);
    }
    emit(out, &skeleton_json(&next))?;
    eprintln!("{} -> {}", s.shape(), next.shape());
    Ok(EXIT_OK)
}
