//! `(a; b, c)`-expansions: injective maps `B(a) x [2] -> B(b, c)` that send
//! `∂B(a) x [2]` into `∂B(b, c)` and lift closeness, stored as explicit tables.

use std::fmt;

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTable {
    a: u32,
    b: u32,
    c: u32,
    /// Entry `2(x-1) + (i-1)` holds the image of `(x, i)`.
    map: Vec<(u32, u32)>,
}

impl ExpansionTable {
    /// Builds a table from `(x, i, u, v)` rows. Every `(x, i)` of
    /// `B(a) x [2]` must appear exactly once and every image must lie in
    /// `B(b, c)`; the expansion clauses themselves are left to
    /// [`verify_expansion`].
    pub fn from_rows(a: u32, b: u32, c: u32, rows: &[(u32, u32, u32, u32)]) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(invalid("expansion parameters must be positive"));
        }
        let len = 4 * a as usize;
        let mut map: Vec<Option<(u32, u32)>> = vec![None; len];
        for &(x, i, u, v) in rows {
            if x < 1 || x > 2 * a || !(1..=2).contains(&i) {
                return Err(invalid(format!(
                    "row ({x},{i},{u},{v}) has input outside B({a})x[2]"
                )));
            }
            if u < 1 || u > 2 * b || v < 1 || v > 2 * c {
                return Err(invalid(format!(
                    "row ({x},{i},{u},{v}) maps outside B({b},{c})"
                )));
            }
            let slot = &mut map[Self::index(x, i)];
            if slot.is_some() {
                return Err(invalid(format!("input ({x},{i}) listed twice")));
            }
            *slot = Some((u, v));
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(idx, e)| {
                e.ok_or_else(|| {
                    invalid(format!(
                        "input ({},{}) has no image",
                        idx / 2 + 1,
                        idx % 2 + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpansionTable { a, b, c, map })
    }

    fn from_fn(a: u32, b: u32, c: u32, f: impl Fn(u32, u32) -> (u32, u32)) -> Self {
        let map = (1..=2 * a).flat_map(|x| [f(x, 1), f(x, 2)]).collect();
        ExpansionTable { a, b, c, map }
    }

    fn index(x: u32, i: u32) -> usize {
        2 * (x as usize - 1) + (i as usize - 1)
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// Image of `(x, i)`, `x` in `1..=2a`, `i` in `{1, 2}`.
    pub fn image(&self, x: u32, i: u32) -> (u32, u32) {
        self.map[Self::index(x, i)]
    }

    /// All rows `(x, i, u, v)` in input order.
    pub fn rows(&self) -> impl Iterator<Item = (u32, u32, u32, u32)> + '_ {
        self.map
            .iter()
            .enumerate()
            .map(|(idx, &(u, v))| (idx as u32 / 2 + 1, idx as u32 % 2 + 1, u, v))
    }

    /// Overwrites one entry. Used to build corrupted tables in tests and
    /// hand-edited tables in tooling.
    pub fn set_image(&mut self, x: u32, i: u32, image: (u32, u32)) -> Result<()> {
        if x < 1 || x > 2 * self.a || !(1..=2).contains(&i) {
            return Err(invalid(format!("({x},{i}) is not in B({})x[2]", self.a)));
        }
        let (u, v) = image;
        if u < 1 || u > 2 * self.b || v < 1 || v > 2 * self.c {
            return Err(invalid(format!(
                "({u},{v}) is not in B({},{})",
                self.b, self.c
            )));
        }
        self.map[Self::index(x, i)] = image;
        Ok(())
    }
}

/// The `(n; n+1, 2n)`-expansion `(x,1) -> (x, 2x)`, `(x,2) -> (x+2, 2x-1)`.
pub fn expansion_ex(n: u32) -> ExpansionTable {
    assert!(n >= 1);
    ExpansionTable::from_fn(n, n + 1, 2 * n, |x, i| {
        if i == 1 {
            (x, 2 * x)
        } else {
            (x + 2, 2 * x - 1)
        }
    })
}

/// The four-case `(n; n+1, n+1)`-expansion family.
pub fn expansion_bh(n: u32) -> ExpansionTable {
    assert!(n >= 1);
    ExpansionTable::from_fn(n, n + 1, n + 1, |x, i| match (x <= n, i) {
        (true, 1) => (x, n + 1),
        (false, 1) => (n + 1, x + 2),
        (true, _) => (2 * n + 3 - x, n + 2),
        (false, _) => (n + 2, 2 * n + 1 - x),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionViolation {
    /// Two inputs share an image.
    Injectivity {
        first: (u32, u32),
        second: (u32, u32),
        image: (u32, u32),
    },
    /// A boundary input lands in the interior of `B(b, c)`.
    Boundary {
        input: (u32, u32),
        image: (u32, u32),
    },
    /// `x ~ y` but the images of `(x, i)` and `(y, j)` are not close.
    Closeness {
        first: (u32, u32),
        second: (u32, u32),
    },
}

impl fmt::Display for ExpansionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionViolation::Injectivity {
                first,
                second,
                image,
            } => write!(
                f,
                "injectivity: {first:?} and {second:?} both map to {image:?}"
            ),
            ExpansionViolation::Boundary { input, image } => write!(
                f,
                "boundary: {input:?} is on the boundary but maps to interior point {image:?}"
            ),
            ExpansionViolation::Closeness { first, second } => write!(
                f,
                "closeness: inputs {first:?} and {second:?} are close but their images are not"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionVerdict {
    Accepted,
    Rejected(ExpansionViolation),
}

impl ExpansionVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, ExpansionVerdict::Accepted)
    }
}

/// Exhaustively checks injectivity, boundary preservation and closeness
/// lifting, in that order.
pub fn verify_expansion(e: &ExpansionTable) -> ExpansionVerdict {
    let inputs: Vec<(u32, u32)> = (1..=2 * e.a).flat_map(|x| [(x, 1), (x, 2)]).collect();

    let mut seen = std::collections::HashMap::new();
    for &(x, i) in &inputs {
        let img = e.image(x, i);
        if let Some(&prev) = seen.get(&img) {
            return ExpansionVerdict::Rejected(ExpansionViolation::Injectivity {
                first: prev,
                second: (x, i),
                image: img,
            });
        }
        seen.insert(img, (x, i));
    }

    for &(x, i) in &inputs {
        if x == 1 || x == 2 * e.a {
            let (u, v) = e.image(x, i);
            if !(u == 1 || u == 2 * e.b || v == 1 || v == 2 * e.c) {
                return ExpansionVerdict::Rejected(ExpansionViolation::Boundary {
                    input: (x, i),
                    image: (u, v),
                });
            }
        }
    }

    for (s, &(x, i)) in inputs.iter().enumerate() {
        for &(y, j) in &inputs[s + 1..] {
            if x.abs_diff(y) > 1 {
                continue;
            }
            let (p, q) = (e.image(x, i), e.image(y, j));
            let close = p == q || p.0.abs_diff(q.0) == 1 || p.1.abs_diff(q.1) == 1;
            if !close {
                return ExpansionVerdict::Rejected(ExpansionViolation::Closeness {
                    first: (x, i),
                    second: (y, j),
                });
            }
        }
    }
    ExpansionVerdict::Accepted
}
