//! Immutable simplicial graphs on dense vertex ids `0..n`, stored as one
//! bit row per vertex.
//!
//! Every analysis in this crate reads a [`Graph`]; nothing mutates one after
//! construction, so a graph can be shared freely between worker threads.

use std::fmt;

use crate::error::{Error, Result};

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
pub(crate) fn test_bit(words: &[u64], v: usize) -> bool {
    (words[v / WORD_BITS] >> (v % WORD_BITS)) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], v: usize) {
    words[v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
}

#[inline]
pub(crate) fn clear_bit(words: &mut [u64], v: usize) {
    words[v / WORD_BITS] &= !(1u64 << (v % WORD_BITS));
}

#[inline]
pub(crate) fn count_ones(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Ascending iterator over the set bits of a word slice.
pub(crate) struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        Ones {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD_BITS + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// A subset of the vertices `0..n` of some graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            bits: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            set_bit(&mut s.bits, v);
        }
        s
    }

    /// Builds a set from vertex ids, rejecting ids `>= n`.
    pub fn from_vertices<I>(n: usize, vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(n);
        for v in vertices {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub(crate) fn from_words(n: usize, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), words_for(n));
        VertexSet { n, bits }
    }

    /// Size of the ambient vertex range `0..n`.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        set_bit(&mut self.bits, v);
        Ok(())
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            clear_bit(&mut self.bits, v);
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && test_bit(&self.bits, v)
    }

    pub fn len(&self) -> usize {
        count_ones(&self.bits)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        Ones::new(&self.bits)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits
            .iter()
            .zip(other.bits.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let bits = self
            .bits
            .iter()
            .zip(other.bits.iter().chain(std::iter::repeat(&0)))
            .map(|(a, b)| a & b)
            .collect();
        VertexSet { n: self.n, bits }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite simplicial graph: no loops, no multi-edges.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `0..n` from unordered pairs. Duplicate pairs
    /// collapse to a single edge.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut b = Builder::new(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(Error::InvalidEdge(u, v));
            }
            b.add_edge(u, v);
        }
        Ok(b.finish())
    }

    pub fn empty(n: usize) -> Self {
        Builder::new(n).finish()
    }

    pub fn complete(n: usize) -> Self {
        let mut b = Builder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge(u, v);
            }
        }
        b.finish()
    }

    /// The cycle 0-1-...-(n-1)-0. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "a cycle needs at least 3 vertices, got {n}"
            )));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && test_bit(self.row(u), v)
    }

    pub fn degree(&self, v: usize) -> usize {
        count_ones(self.row(v))
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            Ones::new(self.row(u))
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Neighbors of `v`; `v` itself is never included.
    pub fn link(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(VertexSet::from_words(self.n, self.row(v).to_vec()))
    }

    /// `link(u) ∩ link(w)` for distinct `u`, `w`.
    pub fn common_neighbors(&self, u: usize, w: usize) -> Result<VertexSet> {
        self.check_vertex(u)?;
        self.check_vertex(w)?;
        if u == w {
            return Err(Error::InvalidPair(u, w));
        }
        let mut out = vec![0u64; self.words];
        self.common_neighbors_into(u, w, &mut out);
        Ok(VertexSet::from_words(self.n, out))
    }

    /// True iff every pair of members is adjacent. Members outside `0..n`
    /// are ignored.
    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let words = &s.words()[..s.words().len().min(self.words)];
        self.is_clique_words(words)
    }

    /// True iff `a-b-c-d-a` is a 4-cycle with both diagonals absent.
    pub fn is_induced_square(&self, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
        let q = [a, b, c, d];
        for &v in &q {
            self.check_vertex(v)?;
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if q[i] == q[j] {
                    return Err(Error::InvalidQuad(q));
                }
            }
        }
        Ok(self.has_edge(a, b)
            && self.has_edge(b, c)
            && self.has_edge(c, d)
            && self.has_edge(d, a)
            && !self.has_edge(a, c)
            && !self.has_edge(b, d))
    }

    /// Whether the graph is connected. The empty graph on zero vertices
    /// counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![0u64; self.words];
        let mut frontier = vec![0usize];
        set_bit(&mut seen, 0);
        let mut count = 1;
        while let Some(v) = frontier.pop() {
            for (i, (s, &r)) in seen.iter_mut().zip(self.row(v)).enumerate() {
                let mut fresh = r & !*s;
                *s |= fresh;
                while fresh != 0 {
                    let b = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    frontier.push(i * WORD_BITS + b);
                    count += 1;
                }
            }
        }
        count == self.n
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn common_neighbors_into(&self, u: usize, w: usize, out: &mut [u64]) {
        for ((o, a), b) in out.iter_mut().zip(self.row(u)).zip(self.row(w)) {
            *o = a & b;
        }
    }

    /// Clique test on a raw bit slice of length `self.words()`.
    pub(crate) fn is_clique_words(&self, s: &[u64]) -> bool {
        for v in Ones::new(s) {
            let row = self.row(v);
            for (i, (&sw, &rw)) in s.iter().zip(row).enumerate() {
                let mut missing = sw & !rw;
                if i == v / WORD_BITS {
                    missing &= !(1u64 << (v % WORD_BITS));
                }
                if missing != 0 {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Unchecked incremental construction; callers guarantee `u != v < n`.
pub(crate) struct Builder {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    m: usize,
}

impl Builder {
    pub(crate) fn new(n: usize) -> Self {
        let words = words_for(n);
        Builder {
            n,
            words,
            adj: vec![0; n * words],
            m: 0,
        }
    }

    #[inline]
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let w = self.words;
        if !test_bit(&self.adj[u * w..(u + 1) * w], v) {
            set_bit(&mut self.adj[u * w..(u + 1) * w], v);
            set_bit(&mut self.adj[v * w..(v + 1) * w], u);
            self.m += 1;
        }
    }

    pub(crate) fn finish(self) -> Graph {
        let g = Graph {
            n: self.n,
            words: self.words,
            adj: self.adj,
            m: self.m,
        };
        debug_assert!(g.is_symmetric_irreflexive());
        g
    }
}

impl Graph {
    fn is_symmetric_irreflexive(&self) -> bool {
        (0..self.n).all(|u| {
            !test_bit(self.row(u), u) && Ones::new(self.row(u)).all(|v| test_bit(self.row(v), u))
        })
    }
}
