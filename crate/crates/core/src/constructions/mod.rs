//! Composition steps on skeletons and the two end-to-end pipelines.
//!
//! Every step here maps skeletons to skeletons; none of them re-verify their
//! input. Callers that accept skeletons from outside should run
//! [`verify_skeleton`](crate::skeleton::verify_skeleton) first.

mod expansion;
mod partitions;

pub use expansion::{
    expansion_bh, expansion_ex, verify_expansion, ExpansionTable, ExpansionVerdict,
    ExpansionViolation,
};
pub use partitions::{partitions_pow2, r, r_usize, PartitionCounter};

use crate::error::{invalid, Error, Result};
use crate::skeleton::{canonicalize, BoxShape, Point, Skeleton};

/// Point-count caps for materialized skeletons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_points: u64,
}

impl Limits {
    pub const DEFAULT_MAX_POINTS: u64 = 1 << 22;

    fn check(&self, what: &str, k: usize) -> Result<()> {
        let fits = k < 64 && (1u64 << k) <= self.max_points;
        if fits {
            Ok(())
        } else {
            Err(Error::ResourceLimit {
                what: what.to_string(),
                needed: format!("2^{k} points"),
                limit: format!("{} points", self.max_points),
            })
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_points: Self::DEFAULT_MAX_POINTS,
        }
    }
}

/// Largest `n` accepted by [`build_bh_skeleton`] regardless of `Limits`.
pub const BH_MAX_N: u32 = 6;

fn check_coord(s: &Skeleton, coord: usize) -> Result<()> {
    if coord >= s.k() {
        return Err(invalid(format!(
            "coordinate {coord} out of range for {} (k = {})",
            s.shape(),
            s.k()
        )));
    }
    Ok(())
}

/// Replaces coordinate `coord` (of dimension `e.a()`) by the two coordinates
/// of `B(e.b(), e.c())`, splitting each point into its two images.
pub fn apply_expansion(s: &Skeleton, coord: usize, e: &ExpansionTable) -> Result<Skeleton> {
    check_coord(s, coord)?;
    let dims = s.shape().dims();
    if dims[coord] != e.a() {
        return Err(invalid(format!(
            "dimension {coord} of {} is {}, expansion expects {}",
            s.shape(),
            dims[coord],
            e.a()
        )));
    }
    if let ExpansionVerdict::Rejected(why) = verify_expansion(e) {
        return Err(invalid(format!("not an expansion: {why}")));
    }
    let mut new_dims = Vec::with_capacity(dims.len() + 1);
    new_dims.extend_from_slice(&dims[..coord]);
    new_dims.extend([e.b(), e.c()]);
    new_dims.extend_from_slice(&dims[coord + 1..]);
    let shape = BoxShape::new(new_dims)?;

    let mut points = Vec::with_capacity(2 * s.len());
    for p in s.points() {
        let x = p.coords();
        for i in 1..=2 {
            let (u, v) = e.image(x[coord], i);
            let mut q = Vec::with_capacity(x.len() + 1);
            q.extend_from_slice(&x[..coord]);
            q.extend([u, v]);
            q.extend_from_slice(&x[coord + 1..]);
            points.push(Point::new(q));
        }
    }
    Ok(Skeleton::from_parts_sorting(shape, points))
}

/// Decrements dimension `coord`, mapping coordinate values above
/// `2(n-1)` down by two.
pub fn shrink(s: &Skeleton, coord: usize) -> Result<Skeleton> {
    check_coord(s, coord)?;
    let n = s.shape().dims()[coord];
    if n < 2 {
        return Err(invalid(format!(
            "dimension {coord} of {} is 1 and cannot shrink",
            s.shape()
        )));
    }
    let mut dims = s.shape().dims().to_vec();
    dims[coord] = n - 1;
    let shape = BoxShape::new(dims)?;
    let cut = 2 * (n - 1);
    let points = s
        .points()
        .iter()
        .map(|p| {
            let mut q = p.coords().to_vec();
            if q[coord] > cut {
                q[coord] -= 2;
            }
            Point::new(q)
        })
        .collect();
    Ok(Skeleton::from_parts_sorting(shape, points))
}

/// Appends a dimension of size `n_new`; the new skeleton is `S x {1, 2}`.
pub fn add_dimension(s: &Skeleton, n_new: u32) -> Result<Skeleton> {
    let mut dims = s.shape().dims().to_vec();
    dims.push(n_new);
    let shape = BoxShape::new(dims)?;
    let points = s
        .points()
        .iter()
        .flat_map(|p| {
            [1, 2].map(|t| {
                let mut q = p.coords().to_vec();
                q.push(t);
                Point::new(q)
            })
        })
        .collect();
    Ok(Skeleton::from_parts_sorting(shape, points))
}

/// Drops dimension `coord`, which must exceed `2^(k-1)`.
///
/// Picks the least value `c` unused in coordinate `coord`, keeps the points
/// whose coordinate lies in `A` = {even values below `c`} ∪ {odd values above
/// `c`}, and projects them away from `coord`.
pub fn remove_dimension(s: &Skeleton, coord: usize) -> Result<Skeleton> {
    check_coord(s, coord)?;
    let k = s.k();
    if k < 2 {
        return Err(invalid("cannot remove the only dimension"));
    }
    let n = s.shape().dims()[coord];
    let threshold_exceeded = k > 32 || n as u64 > 1u64 << (k - 1);
    if !threshold_exceeded {
        return Err(invalid(format!(
            "dimension {coord} of {} is {n}, must exceed 2^{} to be removed",
            s.shape(),
            k - 1
        )));
    }
    let mut used = vec![false; 2 * n as usize + 1];
    for p in s.points() {
        used[p.coords()[coord] as usize] = true;
    }
    let c = (1..=2 * n).find(|&v| !used[v as usize]).ok_or_else(|| {
        invalid("every value of the removed coordinate is used; input is not a skeleton")
    })?;
    let in_a = |v: u32| (v < c && v.is_multiple_of(2)) || (v > c && v % 2 == 1);

    let mut dims = s.shape().dims().to_vec();
    dims.remove(coord);
    let shape = BoxShape::new(dims)?;
    let points = s
        .points()
        .iter()
        .filter(|p| in_a(p.coords()[coord]))
        .map(|p| {
            let mut q = p.coords().to_vec();
            q.remove(coord);
            Point::new(q)
        })
        .collect();
    Ok(Skeleton::from_parts_sorting(shape, points))
}

/// Canonical box sequence obtained from `B(1)` by repeatedly expanding the
/// smallest dimension `d` into `(d+1, 2d)`, up to and including the first
/// box whose dimensions are all at least `n`.
pub fn theorem_box_sequence(n: u32) -> Vec<BoxShape> {
    assert!(n >= 1);
    let mut dims = vec![1u32];
    let mut trace = vec![BoxShape::new(dims.clone()).expect("B(1)")];
    while dims[0] < n {
        let d = dims.remove(0);
        dims.extend([d + 1, 2 * d]);
        dims.sort_unstable();
        trace.push(BoxShape::new(dims.clone()).expect("positive dims"));
    }
    trace
}

/// Closed form of the first box in [`theorem_box_sequence`] with every
/// dimension at least `n`, written with the partition counts `a_j`.
pub fn closed_form_box(n: u32) -> BoxShape {
    assert!(n >= 1);
    let mut pc = PartitionCounter::new();
    let mut dims = Vec::new();
    let mut push = |value: u32, count: usize| dims.extend(std::iter::repeat_n(value, count));
    match n {
        1 => push(1, 1),
        2 => push(2, 2),
        _ if n % 2 == 1 => {
            let m = n.div_ceil(2);
            push(2 * m - 1, pc.get_usize(2 * m as usize - 1));
            for j in m..=2 * m - 2 {
                push(2 * j, pc.get_usize(j as usize));
            }
        }
        _ => {
            let m = n / 2;
            push(2 * m, pc.get_usize(2 * m as usize));
            for j in m + 1..=2 * m - 1 {
                push(2 * j, pc.get_usize(j as usize));
            }
        }
    }
    BoxShape::new(dims).expect("positive dims")
}

/// Output of [`build_theorem_skeleton`].
#[derive(Clone, Debug)]
pub struct TheoremBuild {
    /// Accepted skeleton of `B(n^{r_n})`.
    pub skeleton: Skeleton,
    /// Canonical boxes visited before shrinking, starting at `B(1)`.
    pub trace: Vec<BoxShape>,
}

impl TheoremBuild {
    pub fn pre_shrink_box(&self) -> &BoxShape {
        self.trace.last().expect("trace starts at B(1)")
    }
}

/// Skeleton of `B(n^{r_n})`: expand the smallest dimension with
/// [`expansion_ex`] until every dimension is at least `n`, then shrink each
/// dimension down to `n`.
pub fn build_theorem_skeleton(n: u32, limits: &Limits) -> Result<TheoremBuild> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    let target = closed_form_box(n);
    limits.check(&format!("theorem skeleton for n = {n}"), target.k())?;

    let mut s = Skeleton::unit();
    let mut trace = vec![s.shape().clone()];
    while s.shape().dims()[0] < n {
        let d = s.shape().dims()[0];
        s = canonicalize(&apply_expansion(&s, 0, &expansion_ex(d))?);
        trace.push(s.shape().clone());
    }
    assert_eq!(s.shape(), &target, "pipeline box differs from closed form");

    for coord in 0..s.k() {
        while s.shape().dims()[coord] > n {
            s = shrink(&s, coord)?;
        }
    }
    Ok(TheoremBuild { skeleton: s, trace })
}

/// Skeleton of `B(n^{2^{n-1}})` from repeated [`expansion_bh`] steps.
pub fn build_bh_skeleton(n: u32, limits: &Limits) -> Result<Skeleton> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    if n > BH_MAX_N {
        return Err(Error::ResourceLimit {
            what: format!("BH skeleton for n = {n}"),
            needed: format!("2^(2^{}) points", n - 1),
            limit: format!("n <= {BH_MAX_N}"),
        });
    }
    limits.check(&format!("BH skeleton for n = {n}"), 1usize << (n - 1))?;
    let mut s = Skeleton::unit();
    while s.shape().dims()[0] < n {
        let d = s.shape().dims()[0];
        s = canonicalize(&apply_expansion(&s, 0, &expansion_bh(d))?);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::verify_skeleton;

    fn pts(s: &Skeleton) -> Vec<Vec<u32>> {
        s.points().iter().map(|p| p.coords().to_vec()).collect()
    }

    fn b22() -> Skeleton {
        apply_expansion(&Skeleton::unit(), 0, &expansion_ex(1)).unwrap()
    }

    #[test]
    fn expand_unit_box() {
        let s = b22();
        assert_eq!(s.shape().dims(), &[2, 2]);
        assert_eq!(
            pts(&s),
            vec![vec![1, 2], vec![2, 4], vec![3, 1], vec![4, 3]]
        );
        assert!(verify_skeleton(&s).is_accepted());
    }

    #[test]
    fn expand_b22() {
        let s = apply_expansion(&b22(), 0, &expansion_ex(2)).unwrap();
        assert_eq!(s.shape().dims(), &[3, 4, 2]);
        assert_eq!(s.len(), 8);
        assert!(verify_skeleton(&s).is_accepted());
        assert_eq!(canonicalize(&s).shape().dims(), &[2, 3, 4]);
    }

    #[test]
    fn expand_mismatch() {
        assert!(apply_expansion(&b22(), 0, &expansion_ex(3)).is_err());
        assert!(apply_expansion(&b22(), 2, &expansion_ex(2)).is_err());
    }

    #[test]
    fn expand_rejects_broken_table() {
        let mut e = expansion_ex(2);
        e.set_image(1, 1, (2, 2)).unwrap();
        assert!(apply_expansion(&b22(), 0, &e).is_err());
    }

    #[test]
    fn shrink_b22() {
        let s = shrink(&b22(), 0).unwrap();
        assert_eq!(s.shape().dims(), &[1, 2]);
        assert_eq!(
            pts(&s),
            vec![vec![1, 1], vec![1, 2], vec![2, 3], vec![2, 4]]
        );
        assert!(verify_skeleton(&s).is_accepted());
        assert!(shrink(&Skeleton::unit(), 0).is_err());
    }

    #[test]
    fn add_dimension_unit() {
        let s = add_dimension(&Skeleton::unit(), 5).unwrap();
        assert_eq!(s.shape().dims(), &[1, 5]);
        assert_eq!(
            pts(&s),
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        );
        assert!(verify_skeleton(&s).is_accepted());
    }

    #[test]
    fn remove_dimension_roundtrip() {
        let big = add_dimension(&b22(), 5).unwrap();
        let s = remove_dimension(&big, 2).unwrap();
        assert_eq!(s.shape().dims(), &[2, 2]);
        assert_eq!(s.len(), 4);
        assert!(verify_skeleton(&s).is_accepted());
    }

    #[test]
    fn remove_dimension_threshold() {
        let s = canonicalize(&apply_expansion(&b22(), 0, &expansion_ex(2)).unwrap());
        assert_eq!(s.shape().dims(), &[2, 3, 4]);
        assert!(remove_dimension(&s, 2).is_err());
        assert!(remove_dimension(&Skeleton::unit(), 0).is_err());
    }

    #[test]
    fn box_sequence_start() {
        let seq: Vec<Vec<u32>> = theorem_box_sequence(4)
            .iter()
            .map(|b| b.dims().to_vec())
            .collect();
        assert_eq!(
            seq,
            vec![
                vec![1],
                vec![2, 2],
                vec![2, 3, 4],
                vec![3, 3, 4, 4],
                vec![3, 4, 4, 4, 6],
                vec![4, 4, 4, 4, 6, 6],
            ]
        );
    }

    #[test]
    fn theorem_small_n() {
        let b = build_theorem_skeleton(1, &Limits::default()).unwrap();
        assert_eq!(b.skeleton, Skeleton::unit());
        assert_eq!(b.trace.len(), 1);

        let b = build_theorem_skeleton(3, &Limits::default()).unwrap();
        assert!(b.trace.iter().any(|s| s.dims() == [3, 3, 4, 4]));
        assert_eq!(b.skeleton.shape().dims(), &[3, 3, 3, 3]);
        assert_eq!(b.skeleton.len(), 16);
        assert!(verify_skeleton(&b.skeleton).is_accepted());
    }

    #[test]
    fn theorem_limit() {
        let tight = Limits { max_points: 32 };
        assert!(build_theorem_skeleton(4, &tight).is_err());
        assert!(build_theorem_skeleton(3, &tight).is_ok());
    }

    #[test]
    fn bh_small() {
        let s = build_bh_skeleton(2, &Limits::default()).unwrap();
        assert_eq!(s.shape().dims(), &[2, 2]);
        assert!(verify_skeleton(&s).is_accepted());
        assert!(matches!(
            build_bh_skeleton(7, &Limits::default()),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(matches!(
            build_bh_skeleton(6, &Limits::default()),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
