//! From independent sets to edge colorings of complete graphs.
//!
//! An independent set of size `m` in `C̄_{2n+1}^{⊠k}` colors the edges of
//! `K_m` with `k` colors: an edge gets a coordinate in which its endpoints
//! sit at cyclic distance 1. Projecting onto that coordinate maps the color
//! class homomorphically into `C_{2n+1}`, so no class contains an odd cycle
//! shorter than `2n+1`, which witnesses `R^hom_k(C_{2n-1}) > m`.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;

use crate::capacity::{cyclic_distance, verify_certificate, IndependenceCertificate};
use crate::error::{invalid, Result};

/// Undirected graph on `0..m` without loops or parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(m: usize) -> Self {
        SimpleGraph {
            adj: vec![Vec::new(); m],
        }
    }

    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::new(m);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Cycle `0 - 1 - ... - (len-1) - 0`.
    pub fn cycle(len: usize) -> Self {
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Self::from_edges(len, &edges).expect("cycle of length >= 3")
    }

    pub fn complete(m: usize) -> Self {
        let mut g = SimpleGraph::new(m);
        for u in 0..m {
            for v in u + 1..m {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let m = self.adj.len();
        if u >= m || v >= m {
            return Err(invalid(format!("edge ({u},{v}) outside 0..{m}")));
        }
        if u == v {
            return Err(invalid(format!("loop at {u}")));
        }
        if self.has_edge(u, v) {
            return Err(invalid(format!("edge ({u},{v}) added twice")));
        }
        let pos = self.adj[u].partition_point(|&w| w < v);
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].partition_point(|&w| w < u);
        self.adj[v].insert(pos, u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn complement(&self) -> SimpleGraph {
        let m = self.vertex_count();
        let adj = (0..m)
            .map(|u| (0..m).filter(|&v| v != u && !self.has_edge(u, v)).collect())
            .collect();
        SimpleGraph { adj }
    }
}

/// A shortest odd cycle, as a vertex sequence without the closing repeat,
/// or `None` for bipartite graphs.
///
/// Breadth-first search in the bipartite double cover from `(s, 0)` reaches
/// `(s, 1)` along the shortest odd closed walk through `s`; the overall
/// shortest such walk is a simple cycle.
pub fn shortest_odd_cycle(g: &SimpleGraph) -> Option<Vec<usize>> {
    let m = g.vertex_count();
    let mut best: Option<Vec<usize>> = None;
    let mut dist = vec![usize::MAX; 2 * m];
    let mut parent = vec![usize::MAX; 2 * m];
    let mut queue = VecDeque::new();
    for s in 0..m {
        dist.fill(usize::MAX);
        queue.clear();
        dist[2 * s] = 0;
        queue.push_back(2 * s);
        let limit = best.as_ref().map_or(usize::MAX, Vec::len);
        while let Some(node) = queue.pop_front() {
            let (v, side) = (node / 2, node % 2);
            if dist[node] + 1 >= limit {
                break;
            }
            for &w in g.neighbors(v) {
                let next = 2 * w + (1 - side);
                if dist[next] == usize::MAX {
                    dist[next] = dist[node] + 1;
                    parent[next] = node;
                    queue.push_back(next);
                }
            }
            if dist[2 * s + 1] != usize::MAX {
                break;
            }
        }
        if dist[2 * s + 1] != usize::MAX && dist[2 * s + 1] < limit {
            let mut walk = Vec::with_capacity(dist[2 * s + 1]);
            let mut node = 2 * s + 1;
            while node != 2 * s {
                node = parent[node];
                walk.push(node / 2);
            }
            walk.reverse();
            best = Some(walk);
        }
    }
    best
}

/// Length of a shortest odd cycle, `None` iff `g` is bipartite.
pub fn odd_girth(g: &SimpleGraph) -> Option<usize> {
    shortest_odd_cycle(g).map(|c| c.len())
}

/// A `k`-edge-coloring of `K_m` (colors `1..=k`) claimed to have no color
/// class containing an odd cycle shorter than `2n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyColoring {
    m: usize,
    k: u32,
    n: u32,
    /// Color per pair in lexicographic pair order; 0 means uncolored.
    colors: Vec<u32>,
}

fn pair_index(m: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < m);
    u * (2 * m - u - 1) / 2 + (v - u - 1)
}

impl RamseyColoring {
    pub fn new(m: usize, k: u32, n: u32) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(invalid("k and n must be >= 1"));
        }
        Ok(RamseyColoring {
            m,
            k,
            n,
            colors: vec![0; m * m.saturating_sub(1) / 2],
        })
    }

    /// Every `(u, v, c)` needs `u < v < m` and `c` in `1..=k`; a pair may
    /// appear at most once. Missing pairs stay uncolored.
    pub fn from_edges(m: usize, k: u32, n: u32, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut rc = Self::new(m, k, n)?;
        for &(u, v, c) in edges {
            if !(u < v && v < m) {
                return Err(invalid(format!("edge ({u},{v}) must satisfy u < v < {m}")));
            }
            if rc.color(u, v).is_some() {
                return Err(invalid(format!("edge ({u},{v}) listed twice")));
            }
            rc.set_color(u, v, c)?;
        }
        Ok(rc)
    }

    pub fn set_color(&mut self, u: usize, v: usize, c: u32) -> Result<()> {
        let (u, v) = (u.min(v), u.max(v));
        if u == v || v >= self.m {
            return Err(invalid(format!("({u},{v}) is not an edge of K_{}", self.m)));
        }
        if c == 0 || c > self.k {
            return Err(invalid(format!("color {c} outside 1..={}", self.k)));
        }
        let idx = pair_index(self.m, u, v);
        self.colors[idx] = c;
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn color(&self, u: usize, v: usize) -> Option<u32> {
        let (u, v) = (u.min(v), u.max(v));
        match self.colors[pair_index(self.m, u, v)] {
            0 => None,
            c => Some(c),
        }
    }

    /// `(u, v, color)` for every pair in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Option<u32>)> + '_ {
        let m = self.m;
        (0..m).flat_map(move |u| (u + 1..m).map(move |v| (u, v, self.color(u, v))))
    }

    pub fn class_graph(&self, c: u32) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.m);
        for (u, v, col) in self.edges() {
            if col == Some(c) {
                g.add_edge(u, v).expect("each pair once");
            }
        }
        g
    }
}

/// Colors each edge of `K_m` by the least coordinate where its endpoints are
/// at cyclic distance 1. Vertices follow the certificate's point order.
pub fn certificate_to_coloring(c: &IndependenceCertificate) -> Result<RamseyColoring> {
    if let verdict @ crate::capacity::CertificateVerdict::Rejected { .. } = verify_certificate(c) {
        return Err(invalid(format!("certificate does not verify: {verdict}")));
    }
    let modulus = c.modulus();
    let pts = c.points();
    let mut rc = RamseyColoring::new(pts.len(), c.k() as u32, c.n())?;
    for u in 0..pts.len() {
        for v in u + 1..pts.len() {
            let i = pts[u]
                .iter()
                .zip(&pts[v])
                .position(|(&a, &b)| cyclic_distance(a, b, modulus) == 1)
                .expect("verified certificate");
            rc.set_color(u, v, i as u32 + 1)?;
        }
    }
    Ok(rc)
}

/// `R^hom_k(C_{cycle_len}) >= at_least`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamseyBound {
    pub k: u32,
    pub cycle_len: u32,
    pub at_least: usize,
}

impl fmt::Display for RamseyBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R^hom_{}(C_{}) >= {}",
            self.k, self.cycle_len, self.at_least
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringViolation {
    Uncolored {
        u: usize,
        v: usize,
    },
    /// An odd cycle of length at most `2n - 1` inside one color class.
    ShortOddCycle {
        color: u32,
        cycle: Vec<usize>,
    },
}

impl fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringViolation::Uncolored { u, v } => write!(f, "edge ({u},{v}) is uncolored"),
            ColoringViolation::ShortOddCycle { color, cycle } => write!(
                f,
                "color {color} contains the odd cycle {cycle:?} of length {}",
                cycle.len()
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringVerdict {
    Accepted(RamseyBound),
    Rejected(ColoringViolation),
}

impl ColoringVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, ColoringVerdict::Accepted(_))
    }
}

/// Accepts iff every edge is colored and every color class has odd girth at
/// least `2n + 1` (or is bipartite).
pub fn verify_coloring(rc: &RamseyColoring) -> ColoringVerdict {
    if let Some((u, v, _)) = rc.edges().find(|e| e.2.is_none()) {
        return ColoringVerdict::Rejected(ColoringViolation::Uncolored { u, v });
    }
    let need = 2 * rc.n as usize + 1;
    let short = (1..=rc.k).into_par_iter().find_map_first(|c| {
        shortest_odd_cycle(&rc.class_graph(c))
            .filter(|cyc| cyc.len() < need)
            .map(|cycle| ColoringViolation::ShortOddCycle { color: c, cycle })
    });
    match short {
        Some(v) => ColoringVerdict::Rejected(v),
        None => ColoringVerdict::Accepted(RamseyBound {
            k: rc.k,
            cycle_len: 2 * rc.n - 1,
            at_least: rc.m + 1,
        }),
    }
}

/// Checks that for every color `i`, `v -> point_v[i - 1]` maps color class
/// `i` homomorphically into `C_{2n+1}`. Returns the first edge that breaks
/// this.
pub fn verify_projection(
    rc: &RamseyColoring,
    c: &IndependenceCertificate,
) -> std::result::Result<(), (usize, usize, u32)> {
    let pts = c.points();
    if pts.len() != rc.m || c.k() as u32 != rc.k {
        return Err((0, 0, 0));
    }
    let modulus = c.modulus();
    for (u, v, col) in rc.edges() {
        let Some(col) = col else {
            return Err((u, v, 0));
        };
        let i = col as usize - 1;
        if cyclic_distance(pts[u][i], pts[v][i], modulus) != 1 {
            return Err((u, v, col));
        }
    }
    Ok(())
}

/// The diagonal `{(v, ..., v)}` inside the strong product of the complements
/// of the color classes.
#[derive(Clone, Debug)]
pub struct DiagonalSet {
    pub tuples: Vec<Vec<usize>>,
    /// Complement of color class `i + 1`.
    pub complements: Vec<SimpleGraph>,
    /// First diagonal pair adjacent in the strong product, if any.
    pub adjacent_pair: Option<(usize, usize)>,
}

impl DiagonalSet {
    pub fn is_independent(&self) -> bool {
        self.adjacent_pair.is_none()
    }
}

pub fn diagonal_independent_set(rc: &RamseyColoring) -> Result<DiagonalSet> {
    if let Some((u, v, _)) = rc.edges().find(|e| e.2.is_none()) {
        return Err(invalid(format!("edge ({u},{v}) is uncolored")));
    }
    let m = rc.m;
    let complements: Vec<SimpleGraph> =
        (1..=rc.k).map(|c| rc.class_graph(c).complement()).collect();
    let tuples: Vec<Vec<usize>> = (0..m).map(|v| vec![v; rc.k as usize]).collect();
    // distinct diagonal tuples are adjacent iff adjacent in every factor
    let adjacent_pair = (0..m)
        .flat_map(|u| (u + 1..m).map(move |v| (u, v)))
        .find(|&(u, v)| complements.iter().all(|g| g.has_edge(u, v)));
    Ok(DiagonalSet {
        tuples,
        complements,
        adjacent_pair,
    })
}
