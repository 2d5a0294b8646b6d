//! Induced cycle enumeration.
//!
//! All searches walk induced paths anchored at their minimum vertex and only
//! extend through larger vertices, so every induced cycle is produced once,
//! already in canonical form, without a deduplication pass.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{test_bit, Graph, Ones, WORD_BITS};
use crate::morse;

/// Default cap on DFS node expansions for [`morse_pruned_cycle_search`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

/// An induced cycle `v1, ..., vk` in canonical form: `v1` is the minimum
/// vertex and `v2 < vk`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleWitness(Vec<usize>);

impl CycleWitness {
    /// Canonicalizes a cyclic vertex order (any rotation or reflection).
    /// Does not check the host graph; see [`CycleWitness::verify`].
    pub fn from_cycle(mut vertices: Vec<usize>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::InvalidWitness {
                vertices,
                reason: "a cycle needs at least 3 vertices".into(),
            });
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidWitness {
                vertices,
                reason: "repeated vertex".into(),
            });
        }
        let min_pos = (0..k).min_by_key(|&i| vertices[i]).unwrap_or(0);
        vertices.rotate_left(min_pos);
        if vertices[1] > vertices[k - 1] {
            vertices[1..].reverse();
        }
        Ok(CycleWitness(vertices))
    }

    pub(crate) fn from_canonical(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.len() >= 3);
        debug_assert!(vertices.iter().all(|&v| v >= vertices[0]));
        debug_assert!(vertices[1] < vertices[vertices.len() - 1]);
        CycleWitness(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks that the witness is an induced cycle of `g`.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let k = self.0.len();
        let fail = |reason: String| Error::InvalidWitness {
            vertices: self.0.clone(),
            reason,
        };
        for &v in &self.0 {
            g.check_vertex(v)?;
        }
        for i in 0..k {
            for j in i + 1..k {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                let (a, b) = (self.0[i], self.0[j]);
                if consecutive && !g.has_edge(a, b) {
                    return Err(fail(format!("missing cycle edge {a}-{b}")));
                }
                if !consecutive && g.has_edge(a, b) {
                    return Err(fail(format!("chord {a}-{b}")));
                }
            }
        }
        Ok(())
    }

    /// Vertex pairs of the cycle that are not consecutive, i.e. the pairs
    /// that are non-adjacent in the host when the cycle is induced.
    pub fn non_consecutive_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.0.len();
        (0..k).flat_map(move |i| {
            (i + 2..k)
                .filter(move |&j| !(i == 0 && j == k - 1))
                .map(move |j| (self.0[i], self.0[j]))
        })
    }
}

impl fmt::Debug for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle{:?}", self.0)
    }
}

impl Serialize for CycleWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Streams every induced `k`-cycle of `g` once, in canonical form, in
/// lexicographic order. Consumers may stop early.
pub fn enumerate_induced_cycles(g: &Graph, k: usize) -> InducedCycles<'_> {
    InducedCycles {
        dfs: PathDfs::new(g, k.max(3), k, u64::MAX, NoPrune),
        done: k < 3,
    }
}

pub struct InducedCycles<'g> {
    dfs: PathDfs<'g, NoPrune>,
    done: bool,
}

impl Iterator for InducedCycles<'_> {
    type Item = CycleWitness;

    fn next(&mut self) -> Option<CycleWitness> {
        if self.done {
            return None;
        }
        let c = self.dfs.next_cycle();
        if c.is_none() {
            self.done = true;
        }
        c
    }
}

/// Every induced 4-cycle, as `(witness, [diagonal, diagonal])`, sorted
/// lexicographically by canonical form.
pub fn enumerate_induced_squares(g: &Graph) -> Vec<(CycleWitness, [(usize, usize); 2])> {
    // usize::MAX cap never triggers.
    induced_squares_raw(g, usize::MAX)
        .unwrap_or_default()
        .into_iter()
        .map(|q| {
            let v = q.map(|x| x as usize);
            (
                CycleWitness::from_canonical(v.to_vec()),
                [(v[0], v[2]), (v[1], v[3])],
            )
        })
        .collect()
}

/// Canonical induced squares `[v1, v2, v3, v4]`, sorted.
///
/// Scans each non-adjacent pair `(u, w)`, `u < w`, and each non-adjacent
/// pair `x < y` inside `link(u) ∩ link(w)`. The square `u-x-w-y` is kept only
/// when `u` is its minimum vertex, which selects exactly one of its two
/// diagonals.
pub(crate) fn induced_squares_raw(g: &Graph, cap: usize) -> Result<Vec<[u32; 4]>> {
    let n = g.n();
    let mut out: Vec<[u32; 4]> = Vec::new();
    let mut cn = vec![0u64; g.words()];
    let mut rest = vec![0u64; g.words()];
    for u in 0..n {
        for w in u + 1..n {
            if g.has_edge(u, w) {
                continue;
            }
            g.common_neighbors_into(u, w, &mut cn);
            for x in Ones::new(&cn).filter(|&x| x > u) {
                // y > x, y in cn, y not adjacent to x
                for (i, (r, (&c, &rx))) in rest.iter_mut().zip(cn.iter().zip(g.row(x))).enumerate() {
                    *r = c & !rx & above_mask(i, x);
                }
                for y in Ones::new(&rest) {
                    if out.len() >= cap {
                        return Err(Error::CapacityExceeded { cap });
                    }
                    out.push([u as u32, x as u32, w as u32, y as u32]);
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Mask for word `i` selecting bits of vertices strictly greater than `v`.
/// Bits of word `i` that stand for vertices greater than `v`.
#[inline]
pub(crate) fn above_mask(i: usize, v: usize) -> u64 {
    let wi = v / WORD_BITS;
    if i < wi {
        0
    } else if i > wi {
        u64::MAX
    } else {
        let b = v % WORD_BITS;
        if b == WORD_BITS - 1 {
            0
        } else {
            u64::MAX << (b + 1)
        }
    }
}

/// Finds some Morse `k`-cycle with `kmin <= k <= kmax`, or proves none exists.
pub fn morse_pruned_cycle_search(
    g: &Graph,
    kmin: usize,
    kmax: usize,
) -> Result<Option<CycleWitness>> {
    morse_pruned_cycle_search_with_budget(g, kmin, kmax, DEFAULT_SEARCH_BUDGET)
}

/// As [`morse_pruned_cycle_search`] with an explicit expansion budget.
/// Exhausting the budget is an error, never a negative answer.
///
/// Squares (`k = 4`) are checked one by one. Longer cycles are searched by a
/// DFS over induced paths that drops a partial path as soon as it holds a
/// non-adjacent pair whose common neighborhood is not a clique: in a Morse
/// cycle of length at least 5 every non-adjacent pair has a clique as common
/// neighborhood, and that condition does not depend on the rest of the cycle.
pub fn morse_pruned_cycle_search_with_budget(
    g: &Graph,
    kmin: usize,
    kmax: usize,
    budget: u64,
) -> Result<Option<CycleWitness>> {
    if kmin < 4 || kmin > kmax {
        return Err(Error::InvalidParameter(format!(
            "need 4 <= kmin <= kmax, got kmin = {kmin}, kmax = {kmax}"
        )));
    }
    if kmin == 4 {
        for (c, _) in enumerate_induced_squares(g) {
            if morse::is_morse_cycle_unchecked(g, &c) {
                return Ok(Some(c));
            }
        }
    }
    if kmax < 5 {
        return Ok(None);
    }
    let prune = CliquePrune {
        g,
        scratch: vec![0; g.words()],
    };
    let mut dfs = PathDfs::new(g, kmin.max(5), kmax, budget, prune);
    let found = dfs.next_cycle();
    if found.is_none() && dfs.exhausted {
        return Err(Error::BudgetExceeded { budget });
    }
    if let Some(c) = &found {
        debug_assert!(morse::is_morse_cycle(g, c).unwrap_or(false));
    }
    Ok(found)
}

/// Every Morse `k`-cycle, `k >= 5`, in canonical order, via the pruned DFS.
pub(crate) fn morse_cycles_pruned(g: &Graph, k: usize) -> impl Iterator<Item = CycleWitness> + '_ {
    debug_assert!(k >= 5);
    let prune = CliquePrune {
        g,
        scratch: vec![0; g.words()],
    };
    let mut dfs = PathDfs::new(g, k, k, u64::MAX, prune);
    std::iter::from_fn(move || dfs.next_cycle())
}

/// Decides whether a non-adjacent vertex pair rules out every cycle through it.
pub(crate) trait PairFilter {
    fn rejects(&mut self, u: usize, w: usize) -> bool;
}

pub(crate) struct NoPrune;

impl PairFilter for NoPrune {
    #[inline]
    fn rejects(&mut self, _: usize, _: usize) -> bool {
        false
    }
}

struct CliquePrune<'g> {
    g: &'g Graph,
    scratch: Vec<u64>,
}

impl PairFilter for CliquePrune<'_> {
    fn rejects(&mut self, u: usize, w: usize) -> bool {
        self.g.common_neighbors_into(u, w, &mut self.scratch);
        !self.g.is_clique_words(&self.scratch)
    }
}

/// Explicit-stack DFS over induced paths `v1 < {v2, ...}` that reports the
/// induced cycles closing at lengths in `kmin..=kmax`.
///
/// Per path length `m` it keeps:
/// * `blk_all[m]`: neighbors of `v1..v(m-1)` (forbidden for interior vertices);
/// * `blk_inner[m]`: neighbors of `v2..v(m-1)` (forbidden for the closing vertex);
/// * `ext[m]` / `close[m]`: candidates still to try at this depth.
pub(crate) struct PathDfs<'g, F> {
    g: &'g Graph,
    kmin: usize,
    kmax: usize,
    filter: F,
    next_anchor: usize,
    path: Vec<usize>,
    on_path: Vec<u64>,
    blk_all: Vec<Vec<u64>>,
    blk_inner: Vec<Vec<u64>>,
    ext: Vec<Vec<u64>>,
    close: Vec<Vec<u64>>,
    expansions: u64,
    budget: u64,
    pub(crate) exhausted: bool,
}

impl<'g, F: PairFilter> PathDfs<'g, F> {
    pub(crate) fn new(g: &'g Graph, kmin: usize, kmax: usize, budget: u64, filter: F) -> Self {
        let words = g.words();
        let depth = kmax.max(1) + 1;
        PathDfs {
            g,
            kmin,
            kmax,
            filter,
            next_anchor: 0,
            path: Vec::with_capacity(kmax),
            on_path: vec![0; words],
            blk_all: vec![vec![0; words]; depth],
            blk_inner: vec![vec![0; words]; depth],
            ext: vec![vec![0; words]; depth],
            close: vec![vec![0; words]; depth],
            expansions: 0,
            budget,
            exhausted: false,
        }
    }

    pub(crate) fn next_cycle(&mut self) -> Option<CycleWitness> {
        if self.kmin < 3 || self.kmin > self.kmax {
            return None;
        }
        loop {
            if self.exhausted {
                return None;
            }
            let m = self.path.len();
            if m == 0 {
                if self.next_anchor >= self.g.n() {
                    return None;
                }
                let a = self.next_anchor;
                self.next_anchor += 1;
                self.push(a);
                continue;
            }
            if let Some(x) = pop_lowest(&mut self.close[m]) {
                if self.pairs_survive(x, 1) {
                    let mut c = self.path.clone();
                    c.push(x);
                    return Some(CycleWitness::from_canonical(c));
                }
                continue;
            }
            if let Some(x) = pop_lowest(&mut self.ext[m]) {
                if self.pairs_survive(x, 0) {
                    self.expansions += 1;
                    if self.expansions > self.budget {
                        self.exhausted = true;
                        return None;
                    }
                    self.push(x);
                }
                continue;
            }
            self.pop();
        }
    }

    /// Runs the pair filter on `x` against `path[from..m-1]` (every vertex
    /// that `x` is non-adjacent to), nearest first.
    fn pairs_survive(&mut self, x: usize, from: usize) -> bool {
        let m = self.path.len();
        if m < 2 {
            return true;
        }
        for j in (from..m - 1).rev() {
            if self.filter.rejects(self.path[j], x) {
                return false;
            }
        }
        true
    }

    fn push(&mut self, v: usize) {
        let g = self.g;
        self.path.push(v);
        let m = self.path.len();
        crate::graph::set_bit(&mut self.on_path, v);
        let anchor = self.path[0];

        // blocked sets for length m
        if m == 1 {
            self.blk_all[1].fill(0);
            self.blk_inner[1].fill(0);
        } else {
            let prev = self.path[m - 2];
            let (lo, hi) = self.blk_all.split_at_mut(m);
            for ((dst, src), r) in hi[0].iter_mut().zip(&lo[m - 1]).zip(g.row(prev)) {
                *dst = src | r;
            }
            let (lo, hi) = self.blk_inner.split_at_mut(m);
            if m >= 3 {
                for ((dst, src), r) in hi[0].iter_mut().zip(&lo[m - 1]).zip(g.row(prev)) {
                    *dst = src | r;
                }
            } else {
                hi[0].fill(0);
            }
        }

        let row = g.row(v);
        // interior extension: the new vertex sits at position m + 1 and the
        // cycle must still close at length <= kmax
        if m + 2 <= self.kmax {
            for (i, e) in self.ext[m].iter_mut().enumerate() {
                *e = row[i] & !self.blk_all[m][i] & !self.on_path[i] & above_mask(i, anchor);
            }
        } else {
            self.ext[m].fill(0);
        }
        // closing vertex at position m + 1
        if m >= 2 && m + 1 >= self.kmin && m < self.kmax {
            let v2 = self.path[1];
            let arow = g.row(anchor);
            for (i, c) in self.close[m].iter_mut().enumerate() {
                *c = row[i] & arow[i] & !self.blk_inner[m][i] & !self.on_path[i] & above_mask(i, v2);
            }
        } else {
            self.close[m].fill(0);
        }
    }

    fn pop(&mut self) {
        if let Some(v) = self.path.pop() {
            crate::graph::clear_bit(&mut self.on_path, v);
            debug_assert!(!test_bit(&self.on_path, v));
        }
    }
}

#[inline]
fn pop_lowest(words: &mut [u64]) -> Option<usize> {
    for (i, w) in words.iter_mut().enumerate() {
        if *w != 0 {
            let b = w.trailing_zeros() as usize;
            *w &= *w - 1;
            return Some(i * WORD_BITS + b);
        }
    }
    None
}
