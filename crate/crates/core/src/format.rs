//! Self-describing JSON certificate files.
//!
//! Each file holds one object whose `"type"` field selects the schema:
//!
//! ```text
//! {"type":"skeleton","box":[n_1,...,n_k],"points":[[x_1,...,x_k],...]}
//! {"type":"expansion","a":A,"b":B,"c":C,"map":[[x,i,u,v],...]}
//! {"type":"independent-set","n":N,"k":K,"points":[[...],...]}
//! {"type":"ramsey-coloring","m":M,"k":K,"n":N,"edges":[[u,v,c],...]}
//! ```
//!
//! Writers emit fields in the order above with one point, row or edge per
//! line, so equal certificates serialize to identical bytes. Skeletons are
//! canonicalized (sorted dimensions) before writing.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::capacity::IndependenceCertificate;
use crate::constructions::ExpansionTable;
use crate::error::{Error, Result};
use crate::ramsey::RamseyColoring;
use crate::skeleton::{canonicalize, Skeleton};

#[derive(Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
enum Raw {
    #[serde(rename = "skeleton")]
    Skeleton {
        #[serde(rename = "box")]
        dims: Vec<u32>,
        points: Vec<Vec<u32>>,
    },
    #[serde(rename = "expansion")]
    Expansion {
        a: u32,
        b: u32,
        c: u32,
        map: Vec<[u32; 4]>,
    },
    #[serde(rename = "independent-set")]
    IndependentSet {
        n: u32,
        k: usize,
        points: Vec<Vec<u32>>,
    },
    #[serde(rename = "ramsey-coloring")]
    RamseyColoring {
        m: usize,
        k: u32,
        n: u32,
        edges: Vec<(usize, usize, u32)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Skeleton(Skeleton),
    Expansion(ExpansionTable),
    IndependentSet(IndependenceCertificate),
    RamseyColoring(RamseyColoring),
}

impl Certificate {
    pub fn type_name(&self) -> &'static str {
        match self {
            Certificate::Skeleton(_) => "skeleton",
            Certificate::Expansion(_) => "expansion",
            Certificate::IndependentSet(_) => "independent-set",
            Certificate::RamseyColoring(_) => "ramsey-coloring",
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Certificate::Skeleton(s) => skeleton_json(s),
            Certificate::Expansion(e) => expansion_json(e),
            Certificate::IndependentSet(c) => independent_set_json(c),
            Certificate::RamseyColoring(rc) => coloring_json(rc),
        }
    }
}

/// Parses any certificate. Syntax and schema problems (unknown fields,
/// non-integer entries) are [`Error::Parse`] with serde's line/column;
/// range and consistency problems are [`Error::InvalidInput`].
pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(match raw {
        Raw::Skeleton { dims, points } => {
            Certificate::Skeleton(Skeleton::from_coords(dims, points)?)
        }
        Raw::Expansion { a, b, c, map } => {
            let rows: Vec<_> = map.iter().map(|r| (r[0], r[1], r[2], r[3])).collect();
            Certificate::Expansion(ExpansionTable::from_rows(a, b, c, &rows)?)
        }
        Raw::IndependentSet { n, k, points } => {
            Certificate::IndependentSet(IndependenceCertificate::new(n, k, points)?)
        }
        Raw::RamseyColoring { m, k, n, edges } => {
            Certificate::RamseyColoring(RamseyColoring::from_edges(m, k, n, &edges)?)
        }
    })
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    let text = fs::read_to_string(path)?;
    parse_certificate(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        Error::InvalidInput(msg) => Error::InvalidInput(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_certificate(path: &Path, cert: &Certificate) -> Result<()> {
    fs::write(path, cert.to_json())?;
    Ok(())
}

fn list<T: AsRef<[u32]>>(out: &mut String, rows: impl Iterator<Item = T>) {
    out.push('[');
    let mut first = true;
    for row in rows {
        out.push_str(if first { "\n" } else { ",\n" });
        first = false;
        push_ints(out, row.as_ref().iter().map(|&x| x as u64));
    }
    out.push_str(if first { "]" } else { "\n]" });
}

fn push_ints(out: &mut String, xs: impl Iterator<Item = u64>) {
    out.push('[');
    for (i, x) in xs.enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&x.to_string());
    }
    out.push(']');
}

pub fn skeleton_json(s: &Skeleton) -> String {
    let s = canonicalize(s);
    let mut out = String::from("{\"type\":\"skeleton\",\"box\":");
    push_ints(&mut out, s.shape().dims().iter().map(|&d| d as u64));
    out.push_str(",\"points\":");
    list(&mut out, s.points().iter().map(|p| p.coords()));
    out.push_str("}\n");
    out
}

pub fn expansion_json(e: &ExpansionTable) -> String {
    let mut out = format!(
        "{{\"type\":\"expansion\",\"a\":{},\"b\":{},\"c\":{},\"map\":",
        e.a(),
        e.b(),
        e.c()
    );
    list(&mut out, e.rows().map(|(x, i, u, v)| [x, i, u, v]));
    out.push_str("}\n");
    out
}

pub fn independent_set_json(c: &IndependenceCertificate) -> String {
    let mut out = format!(
        "{{\"type\":\"independent-set\",\"n\":{},\"k\":{},\"points\":",
        c.n(),
        c.k()
    );
    list(&mut out, c.points().iter());
    out.push_str("}\n");
    out
}

pub fn coloring_json(rc: &RamseyColoring) -> String {
    let mut out = format!(
        "{{\"type\":\"ramsey-coloring\",\"m\":{},\"k\":{},\"n\":{},\"edges\":[",
        rc.m(),
        rc.k(),
        rc.n()
    );
    let mut first = true;
    for (u, v, c) in rc.edges() {
        let Some(c) = c else { continue };
        out.push_str(if first { "\n" } else { ",\n" });
        first = false;
        push_ints(&mut out, [u as u64, v as u64, c as u64].into_iter());
    }
    out.push_str(if first { "]}\n" } else { "\n]}\n" });
    out
}
