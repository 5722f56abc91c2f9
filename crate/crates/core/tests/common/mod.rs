//! Brute-force reference implementations. None of them use the library's
//! algorithms, only its data types.

#![allow(dead_code)]

use goodbox::BoxShape;

/// Partitions of `m` into powers of two, by direct recursion over the
/// largest part.
pub fn partitions_into_powers_of_two(m: u64) -> u64 {
    fn go(m: u64, largest: u64) -> u64 {
        if m == 0 {
            return 1;
        }
        let mut total = 0;
        let mut part = 1;
        while part <= largest && part <= m {
            total += go(m - part, part);
            part *= 2;
        }
        total
    }
    go(m, u64::MAX)
}

/// Every point of the grid `[2n_1] x ... x [2n_k]`, lexicographically.
pub fn grid(dims: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &n in dims {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=2 * n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn on_boundary(dims: &[u32], x: &[u32]) -> bool {
    x.iter().zip(dims).any(|(&v, &n)| v == 1 || v == 2 * n)
}

pub fn are_close(x: &[u32], y: &[u32]) -> bool {
    x == y || x.iter().zip(y).any(|(a, b)| a.abs_diff(*b) == 1)
}

/// Whether `points` is a skeleton of `B(dims)`: `2^k` distinct boundary
/// points, pairwise close.
pub fn naive_is_skeleton(dims: &[u32], points: &[Vec<u32>]) -> bool {
    let k = dims.len();
    points.len() == 1 << k
        && points.iter().all(|p| {
            p.len() == k
                && p.iter().zip(dims).all(|(&v, &n)| 1 <= v && v <= 2 * n)
                && on_boundary(dims, p)
        })
        && (0..points.len())
            .all(|i| (0..i).all(|j| points[i] != points[j] && are_close(&points[i], &points[j])))
}

/// Looks for `2^k` pairwise close distinct boundary points: a clique search
/// in the closeness graph with a greedy colouring bound. Parity classes are
/// never used.
pub fn naive_good(dims: &[u32]) -> Option<Vec<Vec<u32>>> {
    let pts: Vec<Vec<u32>> = grid(dims)
        .into_iter()
        .filter(|p| on_boundary(dims, p))
        .collect();
    let n = pts.len();
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && are_close(&pts[i], &pts[j]) {
                adj[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    let need = 1usize << dims.len();
    let mut all = vec![0u64; words];
    for i in 0..n {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut chosen = Vec::new();
    if clique(&adj, &all, need, &mut chosen) {
        Some(chosen.iter().map(|&i| pts[i].clone()).collect())
    } else {
        None
    }
}

fn members(set: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in set.iter().enumerate() {
        for b in 0..64 {
            if word >> b & 1 == 1 {
                out.push(w * 64 + b);
            }
        }
    }
    out
}

fn clique(adj: &[Vec<u64>], cand: &[u64], need: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == need {
        return true;
    }
    let verts = members(cand);
    if chosen.len() + verts.len() < need {
        return false;
    }
    // Greedy colouring: vertices sharing a colour are pairwise non-adjacent,
    // so a clique takes at most one vertex per colour.
    let mut colour_of = vec![0usize; verts.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        let c = classes
            .iter()
            .position(|cls| cls.iter().all(|&u| adj[v][u / 64] >> (u % 64) & 1 == 0))
            .unwrap_or(classes.len());
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(v);
        colour_of[i] = c;
    }
    // Branch on vertices in decreasing colour; vertex i only needs trying
    // while its colour bound can still reach `need`.
    let mut order: Vec<usize> = (0..verts.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(colour_of[i]));
    let mut rest = cand.to_vec();
    for i in order {
        if chosen.len() + colour_of[i] + 1 < need {
            return false;
        }
        let v = verts[i];
        let next: Vec<u64> = rest.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
        chosen.push(v);
        if clique(adj, &next, need, chosen) {
            return true;
        }
        chosen.pop();
        rest[v / 64] &= !(1 << (v % 64));
    }
    false
}

/// Whether the tuples are pairwise non-adjacent in the `k`-th strong power
/// of the complement of `C_m`, via an explicit adjacency matrix of the
/// complement.
pub fn naive_independent(m: u32, points: &[Vec<u32>]) -> bool {
    let m_us = m as usize;
    let comp: Vec<Vec<bool>> = (0..m_us)
        .map(|a| {
            (0..m_us)
                .map(|b| a != b && (a + 1) % m_us != b && (b + 1) % m_us != a)
                .collect()
        })
        .collect();
    let adjacent = |x: &[u32], y: &[u32]| {
        x != y
            && x.iter()
                .zip(y)
                .all(|(&a, &b)| a == b || comp[a as usize][b as usize])
    };
    (0..points.len()).all(|i| (0..i).all(|j| !adjacent(&points[i], &points[j])))
}

/// Length of the shortest odd cycle, by enumerating simple cycles.
pub fn odd_girth_by_cycles(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut best: Option<usize> = None;
    // Cycles through `start` whose other vertices are all larger than it.
    fn walk(
        adj: &[Vec<bool>],
        start: usize,
        at: usize,
        len: usize,
        seen: &mut Vec<bool>,
        best: &mut Option<usize>,
    ) {
        for next in 0..adj.len() {
            if !adj[at][next] {
                continue;
            }
            if next == start && len >= 3 && len % 2 == 1 {
                *best = Some(best.map_or(len, |b| b.min(len)));
            }
            if next > start && !seen[next] {
                seen[next] = true;
                walk(adj, start, next, len + 1, seen, best);
                seen[next] = false;
            }
        }
    }
    for start in 0..n {
        let mut seen = vec![false; n];
        seen[start] = true;
        walk(&adj, start, start, 1, &mut seen, &mut best);
    }
    best
}

/// Largest independent set of a graph given as an adjacency matrix.
pub fn max_independent_set(adj: &[Vec<bool>]) -> usize {
    fn go(adj: &[Vec<bool>], cand: Vec<usize>, size: usize, best: &mut usize) {
        if size + cand.len() <= *best {
            return;
        }
        let Some((&v, rest)) = cand.split_first() else {
            *best = (*best).max(size);
            return;
        };
        let without: Vec<usize> = rest.iter().copied().filter(|&u| !adj[v][u]).collect();
        go(adj, without, size + 1, best);
        go(adj, rest.to_vec(), size, best);
    }
    let mut best = 0;
    go(adj, (0..adj.len()).collect(), 0, &mut best);
    best
}

/// Canonical boxes (non-decreasing dimensions) with at most `max_points`
/// grid points.
pub fn small_boxes(max_points: u64) -> Vec<BoxShape> {
    fn go(prefix: &mut Vec<u32>, size: u64, max_points: u64, out: &mut Vec<BoxShape>) {
        if !prefix.is_empty() {
            out.push(BoxShape::new(prefix.clone()).unwrap());
        }
        let lo = prefix.last().copied().unwrap_or(1);
        let mut n = lo;
        while size * 2 * n as u64 <= max_points {
            prefix.push(n);
            go(prefix, size * 2 * n as u64, max_points, out);
            prefix.pop();
            n += 1;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 1, max_points, &mut out);
    out
}
