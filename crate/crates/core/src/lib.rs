//! Good boxes, their skeletons, and what they certify.
//!
//! A *good box* `B(n_1, ..., n_k)` carries a skeleton: `2^k` boundary points
//! of the grid `[2n_1] x ... x [2n_k]` that are pairwise close. This crate
//! builds skeletons by composing expansions, decides goodness by exhaustive
//! search, and turns skeletons of `B(n^k)` into independent sets of size
//! `2^k + 1` in the `k`-th strong power of the complement of `C_{2n+1}`, and
//! from there into edge colorings of complete graphs witnessing homomorphic
//! Ramsey lower bounds. Every artifact comes with an independent verifier.
//!
//! See `examples/` for one runnable program per capability.

pub mod capacity;
pub mod cli;
pub mod constructions;
mod error;
pub mod format;
pub mod ramsey;
pub mod search;
pub mod skeleton;

pub use error::{Error, Result};
pub use skeleton::{
    canonicalize, close, is_boundary, parity_class, verify_skeleton, BoxShape, Point, Skeleton,
    SkeletonVerdict, Violation,
};
