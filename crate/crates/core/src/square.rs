//! The square graph □(Γ): one node per induced 4-cycle of Γ, two nodes
//! adjacent when the squares' intersection contains a non-adjacent pair.
//!
//! Inside an induced square the only non-adjacent pairs are its two
//! diagonals, so two distinct squares are adjacent exactly when they share a
//! diagonal. Squares are therefore bucketed by diagonal, and components come
//! from uniting each bucket, without ever listing the (possibly quadratic)
//! edge set.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::OnceLock;

use crate::cycles::{above_mask, induced_squares_raw};
use crate::error::{Error, Result};
use crate::graph::{Graph, Ones, VertexSet};

/// Default cap on the number of squares [`build_square_graph`] will index.
pub const DEFAULT_SQUARE_CAP: usize = 10_000_000;

#[derive(Debug)]
pub struct SquareGraph {
    n: usize,
    squares: Vec<[u32; 4]>,
    // bucket b has diagonal diag_keys[b] and squares
    // bucket_members[bucket_start[b]..bucket_start[b + 1]]
    diag_keys: Vec<(u32, u32)>,
    bucket_start: Vec<usize>,
    bucket_members: Vec<u32>,
    square_buckets: Vec<[u32; 2]>,
    components: OnceLock<Vec<Component>>,
}

/// A connected component of □(Γ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Square indices, ascending.
    pub squares: Vec<usize>,
    /// Host vertices covered by the component's squares.
    pub support: VertexSet,
}

pub fn build_square_graph(g: &Graph) -> Result<SquareGraph> {
    SquareGraph::with_capacity(g, DEFAULT_SQUARE_CAP)
}

impl SquareGraph {
    /// Builds □(Γ), failing with `CapacityExceeded` beyond `cap` squares.
    pub fn with_capacity(g: &Graph, cap: usize) -> Result<SquareGraph> {
        let squares = induced_squares_raw(g, cap)?;
        // squares[first[v]..first[v + 1]] are the squares with minimum vertex v
        let first: Vec<usize> = (0..=g.n()).map(|v| squares.partition_point(|q| (q[0] as usize) < v)).collect();
        let mut square_buckets = vec![[u32::MAX; 2]; squares.len()];
        let mut diag_keys = Vec::new();
        let mut bucket_start = vec![0];
        let mut bucket_members = Vec::with_capacity(2 * squares.len());

        let n = g.n();
        let mut cn = vec![0u64; g.words()];
        let mut rest = vec![0u64; g.words()];
        for a in 0..n {
            for b in a + 1..n {
                if g.has_edge(a, b) {
                    continue;
                }
                g.common_neighbors_into(a, b, &mut cn);
                let bucket = diag_keys.len() as u32;
                let before = bucket_members.len();
                for x in Ones::new(&cn) {
                    for (i, (r, (&c, &rx))) in rest.iter_mut().zip(cn.iter().zip(g.row(x))).enumerate() {
                        *r = c & !rx & above_mask(i, x);
                    }
                    for y in Ones::new(&rest) {
                        let q = canonical(a, x, b, y);
                        let lo = first[q[0] as usize];
                        let hi = first[q[0] as usize + 1];
                        let idx = lo + squares[lo..hi]
                            .binary_search(&q)
                            .expect("every diagonal pair yields a listed square");
                        let slot = &mut square_buckets[idx];
                        if slot[0] == u32::MAX {
                            slot[0] = bucket;
                        } else {
                            slot[1] = bucket;
                        }
                        bucket_members.push(idx as u32);
                    }
                }
                if bucket_members.len() > before {
                    bucket_members[before..].sort_unstable();
                    diag_keys.push((a as u32, b as u32));
                    bucket_start.push(bucket_members.len());
                }
            }
        }
        debug_assert!(square_buckets.iter().all(|s| s[0] != u32::MAX && s[1] != u32::MAX));
        Ok(SquareGraph {
            n,
            squares,
            diag_keys,
            bucket_start,
            bucket_members,
            square_buckets,
            components: OnceLock::new(),
        })
    }

    /// Number of vertices of the host graph.
    pub fn host_order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Canonical square `i` as `[v1, v2, v3, v4]`; diagonals are
    /// `{v1, v3}` and `{v2, v4}`.
    pub fn square(&self, i: usize) -> [usize; 4] {
        self.squares[i].map(|v| v as usize)
    }

    pub fn squares(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        self.squares.iter().map(|q| q.map(|v| v as usize))
    }

    /// Squares having `{u, w}` as a diagonal (empty if none).
    pub fn diagonal_bucket(&self, u: usize, w: usize) -> &[u32] {
        let key = (u.min(w) as u32, u.max(w) as u32);
        match self.diag_keys.binary_search(&key) {
            Ok(b) => self.bucket(b),
            Err(_) => &[],
        }
    }

    /// Diagonals with at least one square, ascending.
    pub fn diagonals(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.diag_keys.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    fn bucket(&self, b: usize) -> &[u32] {
        &self.bucket_members[self.bucket_start[b]..self.bucket_start[b + 1]]
    }

    fn bucket_len(&self, b: u32) -> usize {
        let b = b as usize;
        self.bucket_start[b + 1] - self.bucket_start[b]
    }

    /// Squares sharing no diagonal with any other square.
    pub fn isolated_count(&self) -> usize {
        self.square_buckets
            .iter()
            .filter(|[b1, b2]| self.bucket_len(*b1) == 1 && self.bucket_len(*b2) == 1)
            .count()
    }

    pub fn is_isolated(&self, i: usize) -> bool {
        let [b1, b2] = self.square_buckets[i];
        self.bucket_len(b1) == 1 && self.bucket_len(b2) == 1
    }

    /// Square indices adjacent to square `i`, ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.square_buckets[i]
            .iter()
            .flat_map(|&b| self.bucket(b as usize).iter().map(|&j| j as usize))
            .filter(|&j| j != i)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Connected components, ordered by their smallest square index.
    /// Computed on first call and cached.
    pub fn components(&self) -> &[Component] {
        self.components.get_or_init(|| self.compute_components())
    }

    fn compute_components(&self) -> Vec<Component> {
        let mut uf = UnionFind::new(self.squares.len());
        for b in 0..self.diag_keys.len() {
            let members = self.bucket(b);
            for &j in &members[1..] {
                uf.union(members[0] as usize, j as usize);
            }
        }
        let mut comp_of_root = vec![usize::MAX; self.squares.len()];
        let mut out: Vec<Component> = Vec::new();
        for (i, q) in self.squares.iter().enumerate() {
            let r = uf.find(i);
            if comp_of_root[r] == usize::MAX {
                comp_of_root[r] = out.len();
                out.push(Component {
                    squares: Vec::new(),
                    support: VertexSet::empty(self.n),
                });
            }
            let c = &mut out[comp_of_root[r]];
            c.squares.push(i);
            for &v in q {
                // vertices come from the host graph, so they are < n
                let _ = c.support.insert(v as usize);
            }
        }
        out
    }

    /// Some component's squares cover every host vertex. False for an empty
    /// square graph or an empty host.
    pub fn is_cfs(&self) -> bool {
        self.n > 0 && self.components().iter().any(|c| c.support.len() == self.n)
    }

    pub fn connectivity(&self) -> Connectivity {
        let empty = self.squares.is_empty();
        Connectivity {
            connected: !empty && self.components().len() == 1,
            empty,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.connectivity().connected
    }

    /// Every □-edge `(i, j)`, `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.diag_keys.len() {
            let m = self.bucket(b);
            for (k, &i) in m.iter().enumerate() {
                for &j in &m[k + 1..] {
                    out.push((i as usize, j as usize));
                }
            }
        }
        // two distinct squares share at most one diagonal
        out.sort_unstable();
        out
    }

    /// Writes □(Γ) as an edge list plus a JSON array mapping square index to
    /// its four host vertices.
    pub fn write_dump(&self, edges_path: impl AsRef<Path>, squares_json: impl AsRef<Path>) -> Result<()> {
        crate::io::write_pairs(
            self.squares.len(),
            &self.edges(),
            BufWriter::new(File::create(edges_path)?),
        )?;
        let mut w = BufWriter::new(File::create(squares_json)?);
        serde_json::to_writer(&mut w, &self.squares().collect::<Vec<_>>())
            .map_err(|e| Error::Io(e.into()))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

/// Connectivity of □(Γ); the empty square graph is reported as not
/// connected, with `empty` set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub connected: bool,
    pub empty: bool,
}

/// CFS verdict together with the degenerate cases it folds into `false`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CfsReport {
    pub cfs: bool,
    pub square_graph_empty: bool,
    pub host_disconnected: bool,
}

pub fn is_cfs(g: &Graph, sq: &SquareGraph) -> bool {
    debug_assert_eq!(g.n(), sq.host_order());
    sq.is_cfs()
}

pub fn cfs_report(g: &Graph, sq: &SquareGraph) -> CfsReport {
    CfsReport {
        cfs: is_cfs(g, sq),
        square_graph_empty: sq.is_empty(),
        host_disconnected: !g.is_connected(),
    }
}

fn canonical(a: usize, x: usize, b: usize, y: usize) -> [u32; 4] {
    // a < b and x < y; the minimum is a or x
    if a < x {
        [a as u32, x as u32, b as u32, y as u32]
    } else {
        [x as u32, a as u32, y as u32, b as u32]
    }
}

/// Disjoint sets with path halving and union by size.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}
