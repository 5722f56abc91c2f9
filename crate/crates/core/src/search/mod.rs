//! Exhaustive decision procedure for "is this box good?".
//!
//! Distinct close points never share a parity class, so a skeleton picks
//! exactly one boundary point from each of the `2^k` classes. The search
//! assigns classes one at a time (fewest remaining candidates first),
//! keeping for every unassigned class a bitset of candidates. After each
//! placement the bitsets are made pairwise arc consistent and every two- and
//! three-dimensional face of the parity cube is checked for a pairwise close
//! choice; the search backtracks as soon as either fails.
//!
//! With `symmetry` on, the all-even class is restricted to points that are
//! the smallest all-even image (under axis reflections and permutations of
//! equal dimensions) of every point of the skeleton. Each orbit of skeletons
//! keeps at least one member, so the reduction loses no answers.

mod catalog;

pub use catalog::{maximal_good_boxes, Catalog, CatalogBox, Decision, Dim};

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::skeleton::{verify_skeleton, BoxShape, Point, Skeleton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of candidate placements; `None` is unlimited.
    pub budget: Option<u64>,
    /// Search one skeleton per orbit under axis reflections and
    /// permutations of equal dimensions.
    pub symmetry: bool,
    /// Explore top-level branches on the rayon pool.
    pub parallel: bool,
    /// Cap on the per-class value tables.
    pub max_table_bytes: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: None,
            symmetry: false,
            parallel: true,
            max_table_bytes: 1 << 30,
        }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: Option<u64>) -> Self {
        SearchOptions {
            budget,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Carries a verifier-accepted skeleton.
    Good(Skeleton),
    /// The search space was exhausted without finding a skeleton.
    NotGood,
    /// The node budget ran out first; nothing is claimed.
    Exhausted { budget: u64 },
}

impl Verdict {
    pub fn is_good(&self) -> bool {
        matches!(self, Verdict::Good(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Good(_) => "Good",
            Verdict::NotGood => "NotGood",
            Verdict::Exhausted { .. } => "Exhausted",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidate placement attempts, counted as the sequential search would.
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub shape: BoxShape,
    pub verdict: Verdict,
    pub stats: SearchStats,
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} nodes={}",
            self.shape,
            self.verdict.label(),
            self.stats.nodes
        )
    }
}

const MAX_ENUMERATED_POINTS: u128 = 1 << 26;

/// Boundary points grouped by parity class, plus for every class and
/// coordinate a bitset of the candidates taking each value.
///
/// Two points of different classes are close iff they differ by exactly one
/// in some coordinate where their parities differ, so the candidates of class
/// `d` that have a close partner among a set of class-`c` candidates depend
/// only on which values that set takes in those coordinates. This makes
/// exact pairwise arc consistency cheap.
struct Problem {
    k: usize,
    classes: usize,
    sides: Vec<u32>,
    /// Boundary points, class by class, lexicographic within a class.
    points: Vec<Vec<u32>>,
    /// Point index range of class `c` is `class_start[c]..class_start[c+1]`.
    class_start: Vec<usize>,
    /// Word range of class `c` is `word_off[c]..word_off[c+1]`.
    word_off: Vec<usize>,
    words: usize,
    /// Words in one value set (values `1..=max side`).
    vw: usize,
    /// `masks[mask_off[d * k + j] + t * wd..][..wd]` marks the class-`d`
    /// candidates whose coordinate `j` is `t + 1`; `wd` is the word count
    /// of class `d`.
    masks: Vec<u64>,
    mask_off: Vec<usize>,
    faces: Faces,
}

fn class_of(coords: &[u32]) -> usize {
    coords
        .iter()
        .fold(0usize, |acc, &x| (acc << 1) | (x & 1) as usize)
}

fn for_each_point(shape: &BoxShape, mut f: impl FnMut(&[u32])) {
    let k = shape.k();
    let mut x = vec![1u32; k];
    loop {
        f(&x);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < shape.side(i) {
                x[i] += 1;
                break;
            }
            x[i] = 1;
        }
    }
}

fn any_common(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

impl Problem {
    fn build(shape: &BoxShape, max_table_bytes: u64) -> Result<Self> {
        let k = shape.k();
        if k > 20 {
            return Err(Error::ResourceLimit {
                what: format!("search on {shape}"),
                needed: format!("2^{k} parity classes"),
                limit: "k <= 20".into(),
            });
        }
        let total = shape.point_count();
        if total > MAX_ENUMERATED_POINTS {
            return Err(Error::ResourceLimit {
                what: format!("search on {shape}"),
                needed: format!("{total} points"),
                limit: format!("{MAX_ENUMERATED_POINTS} points"),
            });
        }
        let classes = 1usize << k;
        let sides: Vec<u32> = (0..k).map(|i| shape.side(i)).collect();
        let mut by_class: Vec<Vec<Vec<u32>>> = vec![Vec::new(); classes];
        for_each_point(shape, |x| {
            if shape.on_boundary_unchecked(x) {
                by_class[class_of(x)].push(x.to_vec());
            }
        });
        let mut class_start = Vec::with_capacity(classes + 1);
        let mut word_off = Vec::with_capacity(classes + 1);
        let mut points = Vec::new();
        let mut words = 0;
        for members in by_class {
            class_start.push(points.len());
            word_off.push(words);
            words += members.len().div_ceil(64);
            points.extend(members);
        }
        class_start.push(points.len());
        word_off.push(words);

        let side_sum: u64 = sides.iter().map(|&s| s as u64).sum();
        let bytes = side_sum * words as u64 * 8;
        if bytes > max_table_bytes {
            return Err(Error::ResourceLimit {
                what: format!("search on {shape}"),
                needed: format!("{bytes} bytes of value tables"),
                limit: format!("{max_table_bytes} bytes"),
            });
        }
        let mut mask_off = Vec::with_capacity(classes * k);
        let mut len = 0;
        for d in 0..classes {
            let wd = word_off[d + 1] - word_off[d];
            for &side in &sides {
                mask_off.push(len);
                len += side as usize * wd;
            }
        }
        let mut masks = vec![0u64; len];
        for d in 0..classes {
            let wd = word_off[d + 1] - word_off[d];
            for (local, pt) in points[class_start[d]..class_start[d + 1]]
                .iter()
                .enumerate()
            {
                for (j, &x) in pt.iter().enumerate() {
                    let at = mask_off[d * k + j] + (x as usize - 1) * wd + local / 64;
                    masks[at] |= 1 << (local % 64);
                }
            }
        }
        let max_side = sides.iter().copied().max().unwrap_or(1) as usize;
        let faces = Faces::build(&sides, &points);
        Ok(Problem {
            k,
            classes,
            sides,
            points,
            class_start,
            word_off,
            words,
            vw: max_side.div_ceil(64),
            masks,
            mask_off,
            faces,
        })
    }

    fn frame_len(&self) -> usize {
        self.words + self.classes * self.k * self.vw
    }

    fn bit_of(&self, p: usize, class: usize) -> (usize, usize) {
        let local = p - self.class_start[class];
        (self.word_off[class] + local / 64, local % 64)
    }

    fn mask(&self, d: usize, j: usize, t: usize) -> &[u64] {
        let wd = self.word_off[d + 1] - self.word_off[d];
        &self.masks[self.mask_off[d * self.k + j] + t * wd..][..wd]
    }

    fn initial_alive(&self) -> Vec<u64> {
        let mut alive = vec![0u64; self.words];
        for c in 0..self.classes {
            for p in self.class_start[c]..self.class_start[c + 1] {
                let (w, b) = self.bit_of(p, c);
                alive[w] |= 1 << b;
            }
        }
        alive
    }

    fn count(&self, alive: &[u64], c: usize) -> u32 {
        alive[self.word_off[c]..self.word_off[c + 1]]
            .iter()
            .map(|w| w.count_ones())
            .sum()
    }

    /// Candidates of class `c` still alive, ascending.
    fn members(&self, alive: &[u64], c: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &word) in alive[self.word_off[c]..self.word_off[c + 1]]
            .iter()
            .enumerate()
        {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(self.class_start[c] + wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    /// Parity of coordinate `j` in class `d`.
    fn odd(&self, d: usize, j: usize) -> bool {
        (d >> (self.k - 1 - j)) & 1 == 1
    }

    /// Values (as `t = value - 1`) taken by the alive candidates of class
    /// `d`, one `vw`-word set per coordinate.
    fn project(&self, alive: &[u64], d: usize, out: &mut [u64]) {
        let dom = &alive[self.word_off[d]..self.word_off[d + 1]];
        out.fill(0);
        for j in 0..self.k {
            let set = &mut out[j * self.vw..(j + 1) * self.vw];
            let mut t = if self.odd(d, j) { 0 } else { 1 };
            while t < self.sides[j] as usize {
                if any_common(dom, self.mask(d, j, t)) {
                    set[t / 64] |= 1 << (t % 64);
                }
                t += 2;
            }
        }
    }

    fn proj_range(&self, c: usize) -> std::ops::Range<usize> {
        let len = self.k * self.vw;
        self.words + c * len..self.words + (c + 1) * len
    }

    /// Class-`d` candidates close to at least one alive class-`c`
    /// candidate, given the value sets of class `c` in `frame`.
    fn support(&self, frame: &[u64], c: usize, d: usize, out: &mut [u64], nb: &mut [u64]) {
        out.fill(0);
        let proj = &frame[self.proj_range(c)];
        for j in 0..self.k {
            if self.odd(c, j) == self.odd(d, j) {
                continue;
            }
            let side = self.sides[j] as usize;
            nb.fill(0);
            for (wi, &word) in proj[j * self.vw..(j + 1) * self.vw].iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let t = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    if t > 0 {
                        nb[(t - 1) / 64] |= 1 << ((t - 1) % 64);
                    }
                    if t + 1 < side {
                        nb[(t + 1) / 64] |= 1 << ((t + 1) % 64);
                    }
                }
            }
            for (wi, &word) in nb.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let t = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (o, m) in out.iter_mut().zip(self.mask(d, j, t)) {
                        *o |= m;
                    }
                }
            }
        }
    }
}

/// Faces of the parity cube: for a set `J` of coordinates, the classes
/// that agree outside `J`. Closeness between two classes of one face only
/// involves coordinates in `J`, so a face can be checked on the projection
/// of its domains to `J`, as sets of value tuples.
const FACE_CLASSES: usize = 8;

struct Faces {
    subsets: Vec<FaceSet>,
}

struct FaceSet {
    coords: Vec<usize>,
    /// Index of each point's value tuple on `coords`.
    tup: Vec<u8>,
    /// `comp[(src << m | dst) * 128 + t]`: tuples of parity `dst` close to
    /// tuple `t` of parity `src`. Parities are masks with bit `m - 1 - r`
    /// for entry `r`; a tuple entry `a` stands for value `2a + 1` in odd
    /// and `2a + 2` in even coordinates.
    comp: Vec<u128>,
}

fn bits128(mut w: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(t)
        }
    })
}

impl FaceSet {
    fn build(sides: &[u32], points: &[Vec<u32>], coords: Vec<usize>) -> FaceSet {
        let m = coords.len();
        let halves: Vec<usize> = coords.iter().map(|&i| sides[i] as usize / 2).collect();
        let count: usize = halves.iter().product();
        let tup = points
            .iter()
            .map(|x| {
                coords
                    .iter()
                    .zip(&halves)
                    .fold(0usize, |acc, (&i, &h)| acc * h + (x[i] as usize - 1) / 2)
                    as u8
            })
            .collect();
        let values = |t: usize, par: usize| -> Vec<u32> {
            let mut out = vec![0u32; m];
            let mut t = t;
            for r in (0..m).rev() {
                let odd = (par >> (m - 1 - r)) & 1 == 1;
                out[r] = 2 * (t % halves[r]) as u32 + if odd { 1 } else { 2 };
                t /= halves[r];
            }
            out
        };
        let mut comp = vec![0u128; (1 << (2 * m)) * 128];
        for src in 0..1usize << m {
            for dst in (0..1usize << m).filter(|&d| d != src) {
                for t in 0..count {
                    let a = values(t, src);
                    let mut set = 0u128;
                    for u in 0..count {
                        let b = values(u, dst);
                        if a.iter().zip(&b).any(|(x, y)| x.abs_diff(*y) == 1) {
                            set |= 1 << u;
                        }
                    }
                    comp[((src << m) | dst) * 128 + t] = set;
                }
            }
        }
        FaceSet { coords, tup, comp }
    }

    fn comp(&self, src: usize, dst: usize, t: usize) -> u128 {
        self.comp[((src << self.coords.len()) | dst) * 128 + t]
    }

    /// Whether the tuple sets `sets` (of parities `par`) admit a pairwise
    /// close choice, one tuple per set, and if so stores one in `pick`.
    /// Sets whose bit is in `done` are already chosen.
    fn feasible(
        &self,
        par: &[usize; FACE_CLASSES],
        sets: &mut [u128; FACE_CLASSES],
        n: usize,
        done: u32,
        pick: &mut [u8; FACE_CLASSES],
    ) -> bool {
        let Some(c) = (0..n)
            .filter(|&c| done >> c & 1 == 0)
            .min_by_key(|&c| sets[c].count_ones())
        else {
            return true;
        };
        let saved = *sets;
        for t in bits128(saved[c]) {
            let mut ok = true;
            for o in 0..n {
                if o != c && done >> o & 1 == 0 {
                    sets[o] = saved[o] & self.comp(par[c], par[o], t);
                    if sets[o] == 0 {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.feasible(par, sets, n, done | 1 << c, pick) {
                pick[c] = t as u8;
                *sets = saved;
                return true;
            }
            *sets = saved;
        }
        false
    }
}

impl Faces {
    fn build(sides: &[u32], points: &[Vec<u32>]) -> Faces {
        let k = sides.len();
        let mut subsets = Vec::new();
        for m in 2..k {
            for mask in 0..1usize << k {
                if mask.count_ones() as usize != m {
                    continue;
                }
                let coords: Vec<usize> = (0..k).filter(|&i| mask >> (k - 1 - i) & 1 == 1).collect();
                let count: usize = coords.iter().map(|&i| sides[i] as usize / 2).product();
                if count <= 128 && 1 << m <= FACE_CLASSES {
                    subsets.push(FaceSet::build(sides, points, coords));
                }
            }
        }
        Faces { subsets }
    }
}

impl Problem {
    /// Checks every listed face of the parity cube for a pairwise close
    /// choice from the current domains. Verdicts are memoized in `cache`.
    fn faces_ok(
        &self,
        alive: &[u64],
        proj: &mut Vec<u128>,
        cache: &mut FaceCache,
        witness: &mut [[u8; FACE_CLASSES]],
    ) -> Option<(usize, usize)> {
        for (fi, f) in self.faces.subsets.iter().enumerate() {
            let m = f.coords.len();
            proj.clear();
            proj.resize(self.classes, 0);
            for d in 0..self.classes {
                for (wi, &word) in alive[self.word_off[d]..self.word_off[d + 1]]
                    .iter()
                    .enumerate()
                {
                    let mut w = word;
                    while w != 0 {
                        let p = self.class_start[d] + wi * 64 + w.trailing_zeros() as usize;
                        w &= w - 1;
                        proj[d] |= 1u128 << f.tup[p];
                    }
                }
            }
            let free: usize = f.coords.iter().map(|&i| 1usize << (self.k - 1 - i)).sum();
            let sub = |c: usize| {
                f.coords
                    .iter()
                    .fold(0usize, |acc, &i| (acc << 1) | self.odd(c, i) as usize)
            };
            let mut sets = [0u128; FACE_CLASSES];
            let mut par = [0usize; FACE_CLASSES];
            for base in (0..self.classes).filter(|b| b & free == 0) {
                let pick = &mut witness[fi * self.classes + base];
                let mut n = 0;
                let mut x = 0usize;
                loop {
                    par[n] = sub(x);
                    sets[n] = proj[base | x];
                    n += 1;
                    x = x.wrapping_sub(free) & free;
                    if x == 0 {
                        break;
                    }
                }
                if (0..n).all(|c| sets[c] >> pick[c] & 1 == 1) {
                    continue;
                }
                let key = (fi as u16, sets);
                let ok = match cache.get(&key) {
                    Some(&ok) => ok,
                    None => {
                        let ok = f.feasible(&par, &mut sets, n, 0, pick);
                        if cache.len() >= FACE_CACHE_ENTRIES {
                            cache.clear();
                        }
                        cache.insert(key, ok);
                        ok
                    }
                };
                if !ok {
                    return Some((free, base));
                }
                debug_assert_eq!(n, 1 << m);
            }
        }
        None
    }
}

type FaceCache = HashMap<(u16, [u128; FACE_CLASSES]), bool>;
const FACE_CACHE_ENTRIES: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Flow {
    Found,
    Continue,
    OverBudget,
    Cancelled,
}

struct Dfs<'a> {
    prob: &'a Problem,
    budget: u64,
    nodes: u64,
    chosen: Vec<usize>,
    assigned: Vec<bool>,
    /// One frame per depth: alive bitset, then value sets per class.
    stack: Vec<u64>,
    queue: Vec<usize>,
    queued: Vec<bool>,
    scratch: Vec<u64>,
    nb: Vec<u64>,
    proj: Vec<u64>,
    proj2: Vec<u128>,
    face_cache: FaceCache,
    witness: Vec<[u8; FACE_CLASSES]>,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl<'a> Dfs<'a> {
    fn new(prob: &'a Problem, budget: u64, cancel: Option<(&'a AtomicUsize, usize)>) -> Self {
        let max_wd = (0..prob.classes)
            .map(|d| prob.word_off[d + 1] - prob.word_off[d])
            .max()
            .unwrap_or(0);
        Dfs {
            prob,
            budget,
            nodes: 0,
            chosen: Vec::with_capacity(prob.classes),
            assigned: vec![false; prob.classes],
            stack: vec![0; (prob.classes * prob.k + 2) * prob.frame_len()],
            queue: Vec::with_capacity(prob.classes),
            queued: vec![false; prob.classes],
            scratch: vec![0; max_wd],
            nb: vec![0; prob.vw],
            proj: vec![0; prob.k * prob.vw],
            proj2: Vec::new(),
            face_cache: FaceCache::new(),
            witness: vec![[0; FACE_CLASSES]; prob.faces.subsets.len() * prob.classes],
            cancel,
        }
    }

    fn frame(&self, depth: usize) -> &[u64] {
        let fl = self.prob.frame_len();
        &self.stack[depth * fl..(depth + 1) * fl]
    }

    /// Restores pairwise arc consistency in frame `depth` after the domains
    /// of `seeds` shrank. Returns `false` on a wipe-out.
    fn propagate(&mut self, depth: usize, seeds: &[usize]) -> bool {
        let prob = self.prob;
        let fl = prob.frame_len();
        let Dfs {
            stack,
            queue,
            queued,
            scratch,
            nb,
            proj,
            assigned,
            ..
        } = self;
        let frame = &mut stack[depth * fl..(depth + 1) * fl];
        for &c in seeds {
            if !queued[c] {
                queued[c] = true;
                queue.push(c);
            }
        }
        while let Some(c) = queue.pop() {
            queued[c] = false;
            for d in 0..prob.classes {
                if d == c || assigned[d] {
                    continue;
                }
                let wd = prob.word_off[d + 1] - prob.word_off[d];
                let sup = &mut scratch[..wd];
                prob.support(frame, c, d, sup, nb);
                let mut changed = false;
                let mut alive = false;
                for (a, s) in frame[prob.word_off[d]..prob.word_off[d + 1]]
                    .iter_mut()
                    .zip(sup.iter())
                {
                    let n = *a & s;
                    changed |= n != *a;
                    alive |= n != 0;
                    *a = n;
                }
                if !alive {
                    for &q in queue.iter() {
                        queued[q] = false;
                    }
                    queue.clear();
                    return false;
                }
                if changed {
                    prob.project(&frame[..prob.words], d, proj);
                    let range = prob.proj_range(d);
                    if frame[range.clone()] != proj[..] {
                        frame[range].copy_from_slice(proj);
                        if !queued[d] {
                            queued[d] = true;
                            queue.push(d);
                        }
                    }
                }
            }
        }
        true
    }

    /// Places point `p` of class `class` on top of frame `depth`.
    fn place(&mut self, depth: usize, p: usize, class: usize) -> Flow {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Flow::OverBudget;
        }
        if let Some((stop, me)) = self.cancel {
            if self.nodes.is_multiple_of(1024) && stop.load(Ordering::Relaxed) < me {
                return Flow::Cancelled;
            }
        }
        let prob = self.prob;
        let fl = prob.frame_len();
        {
            let (lo, hi) = self.stack.split_at_mut((depth + 1) * fl);
            let next = &mut hi[..fl];
            next.copy_from_slice(&lo[depth * fl..]);
            next[prob.word_off[class]..prob.word_off[class + 1]].fill(0);
            let (w, b) = prob.bit_of(p, class);
            next[w] |= 1 << b;
            let (alive, _) = next.split_at_mut(prob.words);
            prob.project(alive, class, &mut self.proj);
            next[prob.proj_range(class)].copy_from_slice(&self.proj);
        }
        self.assigned[class] = true;
        let ok = self.propagate(depth + 1, &[class]) && {
            let alive = &self.stack[(depth + 1) * fl..(depth + 1) * fl + prob.words];
            prob.faces_ok(
                alive,
                &mut self.proj2,
                &mut self.face_cache,
                &mut self.witness,
            )
            .is_none()
        };
        if !ok {
            self.assigned[class] = false;
            return Flow::Continue;
        }

        let next = self.frame(depth + 1);
        let best = (0..prob.classes)
            .filter(|&c| !self.assigned[c])
            .min_by_key(|&c| (prob.count(next, c), c));
        self.chosen.push(p);
        let Some(c) = best else {
            return Flow::Found;
        };
        let flow = self.expand(depth + 1, c);
        if flow != Flow::Found {
            self.assigned[class] = false;
            self.chosen.pop();
        }
        flow
    }

    fn expand(&mut self, depth: usize, c: usize) -> Flow {
        let members = self.prob.members(self.frame(depth), c);
        for p in members {
            match self.place(depth, p, c) {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }
}

/// Smallest image of `x` in the all-even class under coordinate
/// reflections `x_i -> 2n_i + 1 - x_i` and permutations of equal
/// dimensions.
fn even_orbit_min(shape: &BoxShape, x: &[u32]) -> Vec<u32> {
    let dims = shape.dims();
    let mut y: Vec<u32> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| if v % 2 == 1 { shape.side(i) + 1 - v } else { v })
        .collect();
    let mut seen = vec![false; dims.len()];
    for i in 0..dims.len() {
        if seen[i] {
            continue;
        }
        let block: Vec<usize> = (i..dims.len()).filter(|&j| dims[j] == dims[i]).collect();
        let mut vals: Vec<u32> = block.iter().map(|&j| y[j]).collect();
        vals.sort_unstable();
        for (&j, v) in block.iter().zip(vals) {
            seen[j] = true;
            y[j] = v;
        }
    }
    y
}

/// Node allowance of each top-level branch in the first round.
const ROUND_START: u64 = 1 << 10;

enum BranchResult {
    Found { nodes: u64, chosen: Vec<usize> },
    Done { nodes: u64 },
    OverBudget,
    Cancelled,
}

/// Decides whether `shape` is good.
///
/// Classes are assigned smallest-domain first (ties to the lexicographically
/// smaller parity vector) and candidates are tried in lexicographic order,
/// so the returned skeleton and node count are fixed by the input and
/// options alone.
///
/// With `symmetry`, every skeleton is first moved by a reflection and
/// permutation so that its all-even point is the smallest all-even image of
/// any of its points; the search then fixes that point first and only keeps
/// candidates whose own smallest all-even image is not smaller.
pub fn search_good(shape: &BoxShape, opts: &SearchOptions) -> Result<SearchOutcome> {
    let start = Instant::now();
    let prob = Problem::build(shape, opts.max_table_bytes)?;
    let budget = opts.budget.unwrap_or(u64::MAX);
    let fl = prob.frame_len();
    let all: Vec<usize> = (0..prob.classes).collect();

    let mut root = vec![0u64; fl];
    root[..prob.words].copy_from_slice(&prob.initial_alive());
    let mut consistent = true;
    {
        let mut dfs = Dfs::new(&prob, budget, None);
        dfs.stack[..fl].copy_from_slice(&root);
        for d in 0..prob.classes {
            prob.project(&dfs.stack[..prob.words], d, &mut dfs.proj);
            let range = prob.proj_range(d);
            dfs.stack[range].copy_from_slice(&dfs.proj);
        }
        consistent &= dfs.propagate(0, &all);
        root.copy_from_slice(&dfs.stack[..fl]);
    }

    // Rank of each point's smallest all-even image among the all-even points.
    let rank: Vec<usize> = if opts.symmetry {
        let evens = &prob.points[prob.class_start[0]..prob.class_start[1]];
        prob.points
            .iter()
            .map(|x| {
                evens
                    .binary_search(&even_orbit_min(shape, x))
                    .expect("reflections and permutations preserve the boundary")
            })
            .collect()
    } else {
        Vec::new()
    };

    let first = if opts.symmetry {
        0
    } else {
        (0..prob.classes)
            .min_by_key(|&c| (prob.count(&root, c), c))
            .expect("at least two classes")
    };
    let top: Vec<usize> = if !consistent {
        Vec::new()
    } else if opts.symmetry {
        prob.members(&root, 0)
            .into_iter()
            .filter(|&p| rank[p] == p - prob.class_start[0])
            .collect()
    } else {
        prob.members(&root, first)
    };

    let branch = |j: usize, p: usize, budget: u64, stop: Option<&AtomicUsize>| -> BranchResult {
        if let Some(stop) = stop {
            if stop.load(Ordering::Relaxed) < j {
                return BranchResult::Cancelled;
            }
        }
        let mut dfs = Dfs::new(&prob, budget, stop.map(|s| (s, j)));
        dfs.stack[..fl].copy_from_slice(&root);
        if opts.symmetry {
            let me = p - prob.class_start[0];
            for (q, &r) in rank.iter().enumerate() {
                if r < me {
                    let c = class_of(&prob.points[q]);
                    let (w, b) = prob.bit_of(q, c);
                    dfs.stack[w] &= !(1 << b);
                }
            }
            let mut ok = true;
            for d in 0..prob.classes {
                if prob.count(&dfs.stack[..prob.words], d) == 0 {
                    ok = false;
                    break;
                }
                prob.project(&dfs.stack[..prob.words], d, &mut dfs.proj);
                let range = prob.proj_range(d);
                dfs.stack[range].copy_from_slice(&dfs.proj);
            }
            if !ok || !dfs.propagate(0, &all) {
                // The placement of `p` still counts as one attempt.
                return if budget == 0 {
                    BranchResult::OverBudget
                } else {
                    BranchResult::Done { nodes: 1 }
                };
            }
        }
        match dfs.place(0, p, first) {
            Flow::Found => BranchResult::Found {
                nodes: dfs.nodes,
                chosen: dfs.chosen,
            },
            Flow::Continue => BranchResult::Done { nodes: dfs.nodes },
            Flow::OverBudget => BranchResult::OverBudget,
            Flow::Cancelled => BranchResult::Cancelled,
        }
    };

    // Top-level branches run in rounds: each unresolved branch gets a node
    // allowance that doubles every round, so an early hard refutation does
    // not starve the later branches. The lowest-index success of the first
    // successful round wins; every count below is independent of scheduling.
    // A budget truncates this schedule: the outcome is the unlimited one
    // whenever that needs at most `budget` nodes, and Exhausted otherwise.
    let mut active: Vec<usize> = (0..top.len()).collect();
    let mut used = 0u64;
    let mut allowance = ROUND_START;
    let verdict = loop {
        if active.is_empty() {
            break Verdict::NotGood;
        }
        if used >= budget {
            break Verdict::Exhausted { budget };
        }
        let share = if active.len() == 1 {
            u64::MAX
        } else {
            allowance
        };
        let results: Vec<BranchResult> = if opts.parallel && active.len() > 1 {
            let stop = AtomicUsize::new(usize::MAX);
            let cap = share.min(budget - used);
            active
                .par_iter()
                .map(|&j| {
                    let r = branch(j, top[j], cap, Some(&stop));
                    if matches!(r, BranchResult::Found { .. }) {
                        stop.fetch_min(j, Ordering::Relaxed);
                    }
                    r
                })
                .collect()
        } else {
            let mut out = Vec::new();
            let mut spent = used;
            for &j in &active {
                let r = branch(j, top[j], share.min(budget.saturating_sub(spent)), None);
                let stop = match r {
                    BranchResult::Found { .. } => true,
                    BranchResult::Done { nodes } => {
                        spent += nodes;
                        false
                    }
                    _ => {
                        spent = spent.saturating_add(share);
                        false
                    }
                };
                out.push(r);
                if stop || spent >= budget {
                    break;
                }
            }
            out
        };
        let ran = results.len();
        let mut next = Vec::new();
        let mut found = None;
        for (&j, r) in active.iter().zip(results) {
            match r {
                BranchResult::Found { nodes, chosen } => {
                    used = used.saturating_add(nodes);
                    found = Some(chosen);
                    break;
                }
                BranchResult::Done { nodes } => used = used.saturating_add(nodes),
                BranchResult::OverBudget => {
                    used = used.saturating_add(share);
                    next.push(j);
                }
                BranchResult::Cancelled => {
                    unreachable!("only branches after a success are cancelled")
                }
            }
            if used > budget {
                break;
            }
        }
        if used > budget {
            break Verdict::Exhausted { budget };
        }
        if let Some(chosen) = found {
            break Verdict::Good(assemble(shape, &prob, &chosen));
        }
        // Branches the sequential loop never reached once the budget was
        // spent stay unresolved.
        next.extend_from_slice(&active[ran..]);
        active = next;
        allowance = allowance.saturating_mul(2);
    };
    let nodes = if let Verdict::Exhausted { .. } = verdict {
        budget
    } else {
        used
    };
    debug_assert_eq!(prob.k, shape.k());
    Ok(SearchOutcome {
        shape: shape.clone(),
        verdict,
        stats: SearchStats {
            nodes,
            elapsed: start.elapsed(),
        },
    })
}

fn assemble(shape: &BoxShape, prob: &Problem, chosen: &[usize]) -> Skeleton {
    let points = chosen
        .iter()
        .map(|&p| Point::new(prob.points[p].clone()))
        .collect();
    let s = Skeleton::new(shape.clone(), points).expect("search points lie in the box");
    let verdict = verify_skeleton(&s);
    assert!(
        verdict.is_accepted(),
        "search produced a non-skeleton: {verdict:?}"
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(d: &[u32]) -> BoxShape {
        BoxShape::new(d.to_vec()).unwrap()
    }

    fn run(d: &[u32]) -> SearchOutcome {
        search_good(&shape(d), &SearchOptions::default()).unwrap()
    }

    #[test]
    fn unit_box_is_good() {
        let out = run(&[1]);
        assert_eq!(out.verdict, Verdict::Good(Skeleton::unit()));
    }

    #[test]
    fn one_dimensional_boxes() {
        for n in 2..6 {
            assert_eq!(run(&[n]).verdict, Verdict::NotGood);
        }
    }

    #[test]
    fn two_dimensional_boxes() {
        assert!(run(&[2, 2]).verdict.is_good());
        assert!(run(&[1, 7]).verdict.is_good());
        assert_eq!(run(&[2, 3]).verdict, Verdict::NotGood);
        assert_eq!(run(&[3, 3]).verdict, Verdict::NotGood);
    }

    #[test]
    fn three_dimensional_examples() {
        assert!(run(&[2, 3, 4]).verdict.is_good());
        assert_eq!(run(&[2, 3, 5]).verdict, Verdict::NotGood);
        assert_eq!(run(&[3, 3, 3]).verdict, Verdict::NotGood);
    }

    #[test]
    fn budget_gives_exhausted() {
        let out = search_good(&shape(&[3, 3, 3]), &SearchOptions::with_budget(Some(5))).unwrap();
        assert_eq!(out.verdict, Verdict::Exhausted { budget: 5 });
        assert_eq!(out.stats.nodes, 5);
    }

    #[test]
    fn parallel_matches_sequential() {
        for d in [
            &[2, 3, 4][..],
            &[3, 3, 3],
            &[2, 2, 7],
            &[2, 3, 5],
            &[2, 4, 4, 6],
        ] {
            let par = run(d);
            let seq = search_good(
                &shape(d),
                &SearchOptions {
                    parallel: false,
                    ..SearchOptions::default()
                },
            )
            .unwrap();
            assert_eq!(par.verdict, seq.verdict, "{d:?}");
            assert_eq!(par.stats.nodes, seq.stats.nodes, "{d:?}");
        }
    }

    #[test]
    fn budget_boundary_is_exact() {
        // The second box needs several rounds of top-level allowances.
        for d in [&[2, 3, 4][..], &[3, 3, 3], &[2, 4, 4, 6]] {
            let full = run(d);
            let n = full.stats.nodes;
            assert!(n > 1, "{d:?}");
            for parallel in [false, true] {
                let with = |budget| SearchOptions {
                    budget: Some(budget),
                    parallel,
                    ..SearchOptions::default()
                };
                let at = search_good(&shape(d), &with(n)).unwrap();
                assert_eq!(at.verdict, full.verdict, "{d:?}");
                assert_eq!(at.stats.nodes, n, "{d:?}");
                let below = search_good(&shape(d), &with(n - 1)).unwrap();
                assert_eq!(below.verdict, Verdict::Exhausted { budget: n - 1 }, "{d:?}");
            }
        }
    }

    #[test]
    fn symmetry_preserves_verdicts() {
        let sym = SearchOptions {
            symmetry: true,
            ..SearchOptions::default()
        };
        for d in [
            &[2, 2][..],
            &[2, 3, 4],
            &[3, 3, 3],
            &[2, 2, 2],
            &[2, 4, 4],
            &[2, 3, 5],
            &[1, 3, 3, 3],
        ] {
            let a = run(d).verdict.is_good();
            let b = search_good(&shape(d), &sym).unwrap().verdict.is_good();
            assert_eq!(a, b, "{d:?}");
        }
    }

    #[test]
    fn face_solver_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let sides = [4, 6, 8];
        let points = vec![vec![1, 1, 1]];
        let face = FaceSet::build(&sides, &points, vec![0, 1, 2]);
        let count = 2 * 3 * 4;
        let value = |t: usize, par: usize| -> [u32; 3] {
            let (a, b, c) = (t / 12, t / 4 % 3, t % 4);
            let v = |x: usize, r: usize| 2 * x as u32 + if par >> (2 - r) & 1 == 1 { 1 } else { 2 };
            [v(a, 0), v(b, 1), v(c, 2)]
        };
        let close = |x: [u32; 3], y: [u32; 3]| x.iter().zip(&y).any(|(a, b)| a.abs_diff(*b) == 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let par: [usize; FACE_CLASSES] = std::array::from_fn(|i| i);
        let mut feasible = 0;
        for round in 0..60 {
            let density = if round % 2 == 0 { 0.15 } else { 0.4 };
            let mut sets = [0u128; FACE_CLASSES];
            for set in sets.iter_mut() {
                for t in 0..count {
                    if rng.gen_bool(density) {
                        *set |= 1 << t;
                    }
                }
            }
            let lists: Vec<Vec<usize>> = sets.iter().map(|&s| bits128(s).collect()).collect();
            let mut brute = false;
            let mut pick = vec![0usize; 8];
            fn rec(
                i: usize,
                lists: &[Vec<usize>],
                pick: &mut Vec<usize>,
                ok: &dyn Fn(usize, usize, usize, usize) -> bool,
            ) -> bool {
                if i == lists.len() {
                    return true;
                }
                for &t in &lists[i] {
                    if (0..i).all(|j| ok(j, pick[j], i, t)) {
                        pick[i] = t;
                        if rec(i + 1, lists, pick, ok) {
                            return true;
                        }
                    }
                }
                false
            }
            let ok = |c: usize, t: usize, d: usize, u: usize| close(value(t, c), value(u, d));
            brute |= rec(0, &lists, &mut pick, &ok);
            let mut got = [0u8; FACE_CLASSES];
            let mut work = sets;
            assert_eq!(face.feasible(&par, &mut work, 8, 0, &mut got), brute);
            if brute {
                feasible += 1;
                for c in 0..8 {
                    assert!(sets[c] >> got[c] & 1 == 1);
                    for d in 0..c {
                        assert!(ok(c, got[c] as usize, d, got[d] as usize));
                    }
                }
            }
        }
        assert!(0 < feasible && feasible < 60, "{feasible}");
    }

    #[test]
    fn even_orbit_minimum() {
        let s = shape(&[3, 2, 3]);
        assert_eq!(even_orbit_min(&s, &[2, 4, 4]), vec![2, 4, 4]);
        assert_eq!(even_orbit_min(&s, &[4, 1, 2]), vec![2, 4, 4]);
        assert_eq!(even_orbit_min(&s, &[1, 1, 6]), vec![6, 4, 6]);
    }

    #[test]
    fn class_order_is_lexicographic() {
        assert_eq!(class_of(&[2, 2, 1]), 0b001);
        assert_eq!(class_of(&[1, 2, 2]), 0b100);
    }
}
