//! Independent sets in strong powers of odd-cycle complements, and the
//! closed-form capacity bounds around them.
//!
//! Vertices of the complement of `C_{2n+1}` are `Z/(2n+1)`; two distinct
//! vertices are adjacent iff their cyclic distance is *not* 1. Two distinct
//! tuples of the strong power are therefore non-adjacent exactly when some
//! coordinate sits at cyclic distance 1.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::constructions::r_usize;
use crate::error::{invalid, Result};
use crate::skeleton::Skeleton;

/// Points of `C̄_{2n+1}^{⊠k}` claimed to be pairwise non-adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceCertificate {
    n: u32,
    k: usize,
    points: Vec<Vec<u32>>,
}

impl IndependenceCertificate {
    /// Validates tuple length, the range `0..=2n`, and distinctness; points
    /// are stored in lexicographic order.
    pub fn new(n: u32, k: usize, mut points: Vec<Vec<u32>>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(invalid("n and k must be >= 1"));
        }
        for p in &points {
            if p.len() != k {
                return Err(invalid(format!(
                    "tuple {p:?} has length {}, expected {k}",
                    p.len()
                )));
            }
            if let Some(&x) = p.iter().find(|&&x| x > 2 * n) {
                return Err(invalid(format!(
                    "tuple {p:?} has entry {x} outside 0..={}",
                    2 * n
                )));
            }
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("tuple {:?} listed twice", w[0])));
        }
        Ok(IndependenceCertificate { n, k, points })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Cycle length `2n + 1`.
    pub fn modulus(&self) -> u32 {
        2 * self.n + 1
    }
}

/// Cyclic distance in `Z/m`.
#[inline]
pub fn cyclic_distance(a: u32, b: u32, m: u32) -> u32 {
    let d = a.abs_diff(b);
    d.min(m - d)
}

/// `true` iff distinct tuples `x`, `y` are adjacent in the strong power of
/// the complement of `C_m`.
#[inline]
pub(crate) fn adjacent_in_power(x: &[u32], y: &[u32], m: u32) -> bool {
    x != y
        && x.iter()
            .zip(y)
            .all(|(&a, &b)| cyclic_distance(a, b, m) != 1)
}

/// Embeds a skeleton of `B(n^k)` into `Z/(2n+1)^k` and adds the zero tuple.
pub fn skeleton_to_certificate(s: &Skeleton) -> Result<IndependenceCertificate> {
    let dims = s.shape().dims();
    let n = dims[0];
    if dims.iter().any(|&d| d != n) {
        return Err(invalid(format!("{} is not of the form B(n^k)", s.shape())));
    }
    let mut points: Vec<Vec<u32>> = Vec::with_capacity(s.len() + 1);
    points.push(vec![0; s.k()]);
    points.extend(s.points().iter().map(|p| p.coords().to_vec()));
    IndependenceCertificate::new(n, s.k(), points)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateVerdict {
    Accepted,
    /// Lexicographically first adjacent pair.
    Rejected {
        a: Vec<u32>,
        b: Vec<u32>,
    },
}

impl CertificateVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CertificateVerdict::Accepted)
    }
}

impl fmt::Display for CertificateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateVerdict::Accepted => write!(f, "accepted"),
            CertificateVerdict::Rejected { a, b } => {
                write!(f, "rejected: {a:?} and {b:?} are adjacent")
            }
        }
    }
}

/// Full pairwise scan. Work is split across the rayon pool by first index;
/// the reported witness does not depend on the schedule.
pub fn verify_certificate(c: &IndependenceCertificate) -> CertificateVerdict {
    let m = c.modulus();
    let pts = c.points();
    let hit = (0..pts.len()).into_par_iter().find_map_first(|i| {
        pts[i + 1..]
            .iter()
            .find(|q| adjacent_in_power(&pts[i], q, m))
            .map(|q| (pts[i].clone(), q.clone()))
    });
    match hit {
        None => CertificateVerdict::Accepted,
        Some((a, b)) => CertificateVerdict::Rejected { a, b },
    }
}

/// A capacity value close to 2, kept together with `log2(value - 2)` so the
/// excess stays meaningful after `value` itself has rounded to 2.0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityBound {
    pub value: f64,
    pub log2_excess_over_two: f64,
}

/// `(2^k + 1)^{1/k}` evaluated as `2 * exp(ln1p(2^-k) / k)`.
fn power_root_bound(k: f64) -> CapacityBound {
    let t = (-k * LN_2).exp();
    if t > 0.0 {
        let g = t.ln_1p() / k;
        let value = 2.0 * g.exp();
        let excess = 2.0 * g.exp_m1();
        CapacityBound {
            value,
            log2_excess_over_two: excess.log2(),
        }
    } else {
        // value - 2 = 2 (2^-k / k)(1 + O(2^-k))
        CapacityBound {
            value: 2.0,
            log2_excess_over_two: 1.0 - k - k.log2(),
        }
    }
}

/// `(2^k + 1)^{1/k}`, plus the exact pair `(2^k + 1, k)`.
pub fn lower_bound(k: u64) -> (f64, (BigUint, u64)) {
    assert!(k >= 1);
    let exact = (BigUint::one() << k) + BigUint::one();
    (power_root_bound(k as f64).value, (exact, k))
}

/// The same bound with the excess over 2 retained.
pub fn lower_bound_detailed(k: u64) -> CapacityBound {
    assert!(k >= 1);
    power_root_bound(k as f64)
}

/// `(2^{2^{n-1}} + 1)^{1/2^{n-1}}`, evaluated in the log domain.
pub fn bh_bound(n: u32) -> CapacityBound {
    assert!(n >= 1);
    power_root_bound(2f64.powi(n as i32 - 1))
}

/// `(1 + cos(π/(2n+1))) / cos(π/(2n+1))`.
pub fn theta_cycle_complement(n: u32) -> f64 {
    assert!(n >= 1);
    let c = (PI / (2 * n + 1) as f64).cos();
    (1.0 + c) / c
}

/// Cross-exponentiation budget for [`compare_power_roots`]: exact
/// comparison is used while both `(2^r + 1)^s` and `(2^s + 1)^r` stay below
/// this many bits.
pub const EXACT_COMPARE_MAX_BITS: u64 = 1 << 26;

/// Compares `(2^r + 1)^{1/r}` with `(2^s + 1)^{1/s}`, exactly via
/// `(2^r + 1)^s` vs `(2^s + 1)^r` when that fits [`EXACT_COMPARE_MAX_BITS`],
/// otherwise in the log domain. The boolean is `true` when the exact path
/// was used.
pub fn compare_power_roots(r: u64, s: u64) -> (Ordering, bool) {
    assert!(r >= 1 && s >= 1);
    if r == s {
        return (Ordering::Equal, true);
    }
    let bits = (r + 1).saturating_mul(s).max((s + 1).saturating_mul(r));
    if bits <= EXACT_COMPARE_MAX_BITS {
        let lhs = ((BigUint::one() << r) + BigUint::one()).pow(s as u32);
        let rhs = ((BigUint::one() << s) + BigUint::one()).pow(r as u32);
        return (lhs.cmp(&rhs), true);
    }
    let a = lower_bound_detailed(r).log2_excess_over_two;
    let b = lower_bound_detailed(s).log2_excess_over_two;
    (a.partial_cmp(&b).unwrap_or(Ordering::Equal), false)
}

/// One row of the bounds table.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: u32,
    pub r: usize,
    /// `(2^r + 1, r)`.
    pub exact_lower: (BigUint, u64),
    pub lower: f64,
    pub bh: f64,
    pub theta: f64,
    /// Exact (or log-domain) comparison of the new bound against BH.
    pub lower_vs_bh: Ordering,
    /// `lower <= theta` up to `1e-9` (they coincide at `n = 1, 2`).
    pub below_theta: bool,
}

pub fn bound_report(n: u32) -> BoundReport {
    let r = r_usize(n);
    let (lower, exact_lower) = lower_bound(r as u64);
    let bh_detail = bh_bound(n);
    let bh = bh_detail.value;
    let theta = theta_cycle_complement(n);
    let lower_vs_bh = if n <= 64 {
        compare_power_roots(r as u64, 1u64 << (n - 1)).0
    } else {
        let lo = lower_bound_detailed(r as u64).log2_excess_over_two;
        lo.partial_cmp(&bh_detail.log2_excess_over_two)
            .unwrap_or(Ordering::Equal)
    };
    BoundReport {
        n,
        r,
        exact_lower,
        lower,
        bh,
        theta,
        lower_vs_bh,
        below_theta: lower <= theta + 1e-9,
    }
}

pub fn bounds_table(n_max: u32) -> Vec<BoundReport> {
    (1..=n_max).map(bound_report).collect()
}

/// CSV with header `n,r,lower,bh,theta`.
pub fn bounds_csv(rows: &[BoundReport]) -> String {
    let mut out = String::from("n,r,lower,bh,theta\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{:.9},{:.9},{:.9}\n",
            row.n, row.r, row.lower, row.bh, row.theta
        ));
    }
    out
}
