//! Boxes, points and skeletons.
//!
//! A box `B(n_1, ..., n_k)` is the grid `[2n_1] x ... x [2n_k]` with 1-based
//! coordinates. Two points are *close* (`x ~ y`) when they are equal or some
//! coordinate differs by exactly one. A skeleton of a box is a set of `2^k`
//! boundary points that are pairwise close; a box is *good* when it has one.

use std::fmt;

use rayon::prelude::*;

use crate::error::{invalid, Result};

/// Dimension vector `(n_1, ..., n_k)` of a box. Every `n_i >= 1`, `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxShape(Vec<u32>);

impl BoxShape {
    pub fn new(dims: Vec<u32>) -> Result<Self> {
        if dims.is_empty() {
            return Err(invalid("a box needs at least one dimension"));
        }
        if let Some(i) = dims.iter().position(|&n| n == 0) {
            return Err(invalid(format!(
                "dimension {i} is 0; every n_i must be >= 1"
            )));
        }
        if let Some(i) = dims.iter().position(|&n| n > u32::MAX / 4) {
            return Err(invalid(format!("dimension {i} is too large")));
        }
        Ok(BoxShape(dims))
    }

    /// `B(n^k)`.
    pub fn cube(n: u32, k: usize) -> Result<Self> {
        Self::new(vec![n; k])
    }

    pub fn dims(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Side length `2 n_i` of coordinate `i`.
    pub fn side(&self, i: usize) -> u32 {
        2 * self.0[i]
    }

    /// Number of lattice points `prod 2n_i`, saturating at `u128::MAX`.
    pub fn point_count(&self) -> u128 {
        self.0
            .iter()
            .try_fold(1u128, |acc, &n| acc.checked_mul(2 * n as u128))
            .unwrap_or(u128::MAX)
    }

    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Stable sorting permutation: canonical coordinate `j` is original
    /// coordinate `perm[j]`.
    pub fn canonical_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.k()).collect();
        perm.sort_by_key(|&i| self.0[i]);
        perm
    }

    pub fn canonical(&self) -> BoxShape {
        let mut dims = self.0.clone();
        dims.sort_unstable();
        BoxShape(dims)
    }

    /// Checks that `coords` is a point of this box.
    pub fn check(&self, coords: &[u32]) -> Result<()> {
        if coords.len() != self.k() {
            return Err(invalid(format!(
                "point {coords:?} has {} coordinates, box {self} has {}",
                coords.len(),
                self.k()
            )));
        }
        for (i, &x) in coords.iter().enumerate() {
            if x < 1 || x > self.side(i) {
                return Err(invalid(format!(
                    "coordinate {i} of point {coords:?} is {x}, outside 1..={}",
                    self.side(i)
                )));
            }
        }
        Ok(())
    }

    /// `true` iff every coordinate of the canonical form is at most the
    /// matching coordinate of `other`'s canonical form, i.e. this box is
    /// obtainable from `other` by permuting and shrinking dimensions.
    pub fn fits_inside(&self, other: &BoxShape) -> bool {
        if self.k() != other.k() {
            return false;
        }
        let a = self.canonical();
        let b = other.canonical();
        a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
    }

    pub(crate) fn on_boundary_unchecked(&self, coords: &[u32]) -> bool {
        coords
            .iter()
            .enumerate()
            .any(|(i, &x)| x == 1 || x == self.side(i))
    }
}

impl fmt::Display for BoxShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// A lattice point; coordinate `i` lives in `1..=2n_i` of the box it is used with.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<u32>);

impl Point {
    pub fn new(coords: Vec<u32>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Parity class packed into a bitmask, bit `i` set iff `x_i` is odd.
    /// Only meaningful for `k <= 64`.
    pub fn parity_mask(&self) -> u64 {
        parity_mask(&self.0)
    }
}

impl From<Vec<u32>> for Point {
    fn from(v: Vec<u32>) -> Self {
        Point(v)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn parity_mask(coords: &[u32]) -> u64 {
    coords
        .iter()
        .take(64)
        .enumerate()
        .fold(0u64, |m, (i, &x)| m | (((x & 1) as u64) << i))
}

#[inline]
pub(crate) fn close_coords(x: &[u32], y: &[u32]) -> bool {
    x == y || x.iter().zip(y).any(|(a, b)| a.abs_diff(*b) == 1)
}

pub fn is_boundary(p: &Point, b: &BoxShape) -> Result<bool> {
    b.check(p.coords())?;
    Ok(b.on_boundary_unchecked(p.coords()))
}

pub fn close(x: &Point, y: &Point) -> Result<bool> {
    if x.k() != y.k() {
        return Err(invalid(format!(
            "cannot compare {x} and {y}: dimension mismatch"
        )));
    }
    Ok(close_coords(x.coords(), y.coords()))
}

/// Coordinatewise residues mod 2.
pub fn parity_class(p: &Point) -> Vec<u8> {
    p.coords().iter().map(|&x| (x % 2) as u8).collect()
}

/// A claimed skeleton: a box together with a set of its points.
///
/// Construction only checks that the points belong to the box and are
/// distinct; whether they form a skeleton is decided by [`verify_skeleton`].
/// Points are kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Skeleton {
    shape: BoxShape,
    points: Vec<Point>,
}

impl Skeleton {
    pub fn new(shape: BoxShape, points: Vec<Point>) -> Result<Self> {
        for p in &points {
            shape.check(p.coords())?;
        }
        let mut points = points;
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("point {} listed twice", w[0])));
        }
        Ok(Skeleton { shape, points })
    }

    pub fn from_coords(dims: Vec<u32>, points: Vec<Vec<u32>>) -> Result<Self> {
        Self::new(
            BoxShape::new(dims)?,
            points.into_iter().map(Point::new).collect(),
        )
    }

    /// Caller guarantees every point lies in `shape`.
    pub(crate) fn from_parts_sorting(shape: BoxShape, mut points: Vec<Point>) -> Self {
        debug_assert!(points.iter().all(|p| shape.check(p.coords()).is_ok()));
        points.sort_unstable();
        points.dedup();
        Skeleton { shape, points }
    }

    /// The skeleton `{(1), (2)}` of `B(1)`.
    pub fn unit() -> Self {
        Skeleton {
            shape: BoxShape(vec![1]),
            points: vec![Point(vec![1]), Point(vec![2])],
        }
    }

    pub fn shape(&self) -> &BoxShape {
        &self.shape
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn k(&self) -> usize {
        self.shape.k()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The first clause a claimed skeleton violates, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Expected `2^k` points.
    Size { k: usize, found: usize },
    /// A point off the boundary.
    Boundary { point: Point },
    /// Two distinct points that are not close.
    Closeness { a: Point, b: Point },
    /// Two points in the same parity class.
    Parity { a: Point, b: Point },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Size { k, found } => {
                write!(f, "size: expected 2^{k} points, found {found}")
            }
            Violation::Boundary { point } => write!(f, "boundary: {point} is interior"),
            Violation::Closeness { a, b } => write!(f, "closeness: {a} and {b} are not close"),
            Violation::Parity { a, b } => {
                write!(f, "parity: {a} and {b} share a parity class")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkeletonVerdict {
    Accepted,
    Rejected(Violation),
}

impl SkeletonVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, SkeletonVerdict::Accepted)
    }
}

/// Checks, in order, size, boundary membership, pairwise closeness and the
/// parity cross-check (every parity class hit exactly once). The witness is
/// always the first offender in point order.
pub fn verify_skeleton(s: &Skeleton) -> SkeletonVerdict {
    let k = s.k();
    let pts = s.points();
    let size_ok = k < usize::BITS as usize && pts.len() == 1usize << k;
    if !size_ok {
        return SkeletonVerdict::Rejected(Violation::Size {
            k,
            found: pts.len(),
        });
    }
    if let Some(p) = pts
        .iter()
        .find(|p| !s.shape().on_boundary_unchecked(p.coords()))
    {
        return SkeletonVerdict::Rejected(Violation::Boundary { point: p.clone() });
    }
    let far = (0..pts.len()).into_par_iter().find_map_first(|i| {
        pts[i + 1..]
            .iter()
            .find(|q| !close_coords(pts[i].coords(), q.coords()))
            .map(|q| (pts[i].clone(), q.clone()))
    });
    if let Some((a, b)) = far {
        return SkeletonVerdict::Rejected(Violation::Closeness { a, b });
    }
    // 2^k points fit in memory, so k < 64 here.
    let mut owner: Vec<Option<usize>> = vec![None; pts.len()];
    for (i, p) in pts.iter().enumerate() {
        let m = p.parity_mask() as usize;
        if let Some(j) = owner[m] {
            return SkeletonVerdict::Rejected(Violation::Parity {
                a: pts[j].clone(),
                b: p.clone(),
            });
        }
        owner[m] = Some(i);
    }
    SkeletonVerdict::Accepted
}

/// Sorts the dimensions (stable) and applies the same permutation to
/// every point.
pub fn canonicalize(s: &Skeleton) -> Skeleton {
    if s.shape().is_canonical() {
        return s.clone();
    }
    let perm = s.shape().canonical_permutation();
    let shape = BoxShape(perm.iter().map(|&i| s.shape().dims()[i]).collect());
    let points = s
        .points()
        .iter()
        .map(|p| Point(perm.iter().map(|&i| p.coords()[i]).collect()))
        .collect();
    Skeleton::from_parts_sorting(shape, points)
}
