//! Maximal good boxes in a fixed dimension.
//!
//! Goodness is downward closed under shrinking a dimension, and a dimension
//! above `2^(k-1)` can be removed and re-added freely, so in dimension `k`
//! every size from `T = 2^(k-1) + 1` upward behaves the same. Boxes are
//! therefore enumerated with dimensions in `1..=T`, a dimension equal to `T`
//! is reported as `∞`, and boxes carrying a `T` are decided through the
//! `(k-1)`-dimensional box left after dropping it.

use std::collections::HashMap;
use std::fmt;

use super::{search_good, SearchOptions, Verdict};
use crate::error::{invalid, Result};
use crate::skeleton::BoxShape;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => write!(f, "∞"),
        }
    }
}

/// A box in a catalog listing; `∞` stands for an arbitrarily large size.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CatalogBox(pub Vec<Dim>);

impl CatalogBox {
    pub fn parse(s: &str) -> Option<Self> {
        let inner = s.trim().strip_prefix("B(")?.strip_suffix(')')?;
        inner
            .split(',')
            .map(|t| match t.trim() {
                "∞" | "inf" => Some(Dim::Infinite),
                v => v.parse().ok().map(Dim::Finite),
            })
            .collect::<Option<Vec<_>>>()
            .map(CatalogBox)
    }
}

impl fmt::Display for CatalogBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// How a box's goodness was settled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Decided by [`search_good`]; `nodes` as reported there.
    Searched { good: bool, nodes: u64 },
    /// Fits inside a box already known to be good.
    BelowGood(BoxShape),
    /// Contains a box already known to be bad.
    AboveBad(BoxShape),
    /// Has a dimension at the threshold; same verdict as the smaller box.
    Reduced { good: bool, from: BoxShape },
    /// Search budget ran out.
    Exhausted,
}

impl Decision {
    pub fn is_good(&self) -> Option<bool> {
        match self {
            Decision::Searched { good, .. } | Decision::Reduced { good, .. } => Some(*good),
            Decision::BelowGood(_) => Some(true),
            Decision::AboveBad(_) => Some(false),
            Decision::Exhausted => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub k: usize,
    pub cap: u32,
    /// Sizes from this value up are reported as `∞`.
    pub threshold: u32,
    /// Maximal good boxes, sorted.
    pub maximal: Vec<CatalogBox>,
    /// Every box decided, in dimension `k` and below, in decision order.
    pub decisions: Vec<(BoxShape, Decision)>,
    /// Total search nodes across all searches.
    pub nodes: u64,
}

impl Catalog {
    /// `true` when no search ran out of budget.
    pub fn is_complete(&self) -> bool {
        self.decisions
            .iter()
            .all(|(_, d)| *d != Decision::Exhausted)
    }

    pub fn searched(&self) -> impl Iterator<Item = &(BoxShape, Decision)> {
        self.decisions
            .iter()
            .filter(|(_, d)| matches!(d, Decision::Searched { .. }))
    }
}

fn threshold(k: usize) -> u32 {
    (1u32 << (k - 1)) + 1
}

/// Non-decreasing vectors of length `k` over `1..=max`, ordered by sum then
/// lexicographically.
fn canonical_boxes(k: usize, max: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, lo: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            rec(k, v, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, 1, max, &mut Vec::new(), &mut out);
    out.sort_by_key(|v| (v.iter().map(|&x| x as u64).sum::<u64>(), v.clone()));
    out
}

struct Decider<'a> {
    opts: &'a SearchOptions,
    memo: HashMap<BoxShape, bool>,
    good: HashMap<usize, Vec<BoxShape>>,
    bad: HashMap<usize, Vec<BoxShape>>,
    decisions: Vec<(BoxShape, Decision)>,
    nodes: u64,
}

impl Decider<'_> {
    /// Decides a canonical box whose dimensions are already clamped to the
    /// threshold of its own dimension count.
    fn decide(&mut self, b: &BoxShape) -> Result<Option<bool>> {
        if let Some(&g) = self.memo.get(b) {
            return Ok(Some(g));
        }
        let k = b.k();
        let t = threshold(k);
        let decision = if k >= 2 && b.dims().last() == Some(&t) {
            let mut rest = b.dims()[..k - 1].to_vec();
            let tt = threshold(k - 1);
            for d in rest.iter_mut() {
                *d = (*d).min(tt);
            }
            let from = BoxShape::new(rest)?;
            match self.decide(&from)? {
                Some(good) => Decision::Reduced { good, from },
                None => Decision::Exhausted,
            }
        } else if let Some(w) = self
            .bad
            .get(&k)
            .and_then(|v| v.iter().find(|w| w.fits_inside(b)))
        {
            Decision::AboveBad(w.clone())
        } else if let Some(w) = self
            .good
            .get(&k)
            .and_then(|v| v.iter().find(|w| b.fits_inside(w)))
        {
            Decision::BelowGood(w.clone())
        } else {
            let out = search_good(b, self.opts)?;
            self.nodes += out.stats.nodes;
            match out.verdict {
                Verdict::Good(_) => Decision::Searched {
                    good: true,
                    nodes: out.stats.nodes,
                },
                Verdict::NotGood => Decision::Searched {
                    good: false,
                    nodes: out.stats.nodes,
                },
                Verdict::Exhausted { .. } => Decision::Exhausted,
            }
        };
        let verdict = decision.is_good();
        match verdict {
            Some(true) => {
                self.good.entry(k).or_default().push(b.clone());
                self.memo.insert(b.clone(), true);
            }
            Some(false) => {
                self.bad.entry(k).or_default().push(b.clone());
                self.memo.insert(b.clone(), false);
            }
            None => {}
        }
        self.decisions.push((b.clone(), decision));
        Ok(verdict)
    }
}

/// Lists the maximal good boxes of dimension `k`, deciding every canonical
/// box with dimensions up to `min(cap, 2^(k-1) + 1)`.
///
/// `cap` must reach the threshold `2^(k-1) + 1` (for `k = 1`, 2), otherwise
/// `∞` entries could not be detected.
pub fn maximal_good_boxes(k: usize, cap: u32, opts: &SearchOptions) -> Result<Catalog> {
    if k == 0 || k > 16 {
        return Err(invalid(format!("catalog dimension {k} outside 1..=16")));
    }
    let t = threshold(k);
    if cap < t {
        return Err(invalid(format!(
            "cap {cap} is below the threshold {t} for k = {k}"
        )));
    }
    let mut dec = Decider {
        opts,
        memo: HashMap::new(),
        good: HashMap::new(),
        bad: HashMap::new(),
        decisions: Vec::new(),
        nodes: 0,
    };
    // Lower dimensions first so threshold reductions land on decided boxes.
    for kk in 1..=k {
        for dims in canonical_boxes(kk, threshold(kk)) {
            dec.decide(&BoxShape::new(dims)?)?;
        }
    }

    let goods: Vec<BoxShape> = canonical_boxes(k, t)
        .into_iter()
        .map(|d| BoxShape::new(d).expect("positive"))
        .filter(|b| dec.memo.get(b) == Some(&true))
        .collect();
    let mut maximal: Vec<CatalogBox> = goods
        .iter()
        .filter(|b| !goods.iter().any(|o| o != *b && b.fits_inside(o)))
        .map(|b| {
            CatalogBox(
                b.dims()
                    .iter()
                    .map(|&d| {
                        if k >= 2 && d == t {
                            Dim::Infinite
                        } else {
                            Dim::Finite(d)
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    maximal.sort();
    Ok(Catalog {
        k,
        cap,
        threshold: t,
        maximal,
        decisions: dec.decisions,
        nodes: dec.nodes,
    })
}
