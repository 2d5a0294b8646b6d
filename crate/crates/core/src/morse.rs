//! The Morse predicate for induced subgraphs.
//!
//! A vertex set `S` is Morse when every induced square meeting `S` in a
//! non-adjacent pair lies inside `S`. The production check works pairwise:
//! a non-adjacent pair inside an induced square is one of its diagonals, and
//! for non-adjacent `u, w` and non-adjacent `x, y` in `link(u) ∩ link(w)`
//! the quadruple `u-x-w-y` is automatically an induced square. So `S` is
//! Morse iff for every non-adjacent `u, w ∈ S`, every vertex of
//! `link(u) ∩ link(w)` with a non-neighbor inside that common neighborhood
//! belongs to `S`. No square is ever materialized.
//!
//! [`MorseOracle`] implements the definition literally from the full list of
//! induced squares and is kept for cross-validation.

use crate::cycles::{enumerate_induced_squares, morse_cycles_pruned, CycleWitness};
use crate::error::{Error, Result};
use crate::graph::{Graph, Ones, VertexSet};

fn check_members(g: &Graph, s: &VertexSet) -> Result<()> {
    match s.iter().find(|&v| v >= g.n()) {
        Some(v) => Err(Error::VertexOutOfRange { vertex: v, n: g.n() }),
        None => Ok(()),
    }
}

/// Pairwise Morse test. Pairs are scanned in lexicographic order and the
/// first violation returns `false`.
pub fn is_morse_subgraph(g: &Graph, s: &VertexSet) -> Result<bool> {
    check_members(g, s)?;
    let members = s.to_vec();
    let mut cn = vec![0u64; g.words()];
    for (i, &u) in members.iter().enumerate() {
        for &w in &members[i + 1..] {
            if g.has_edge(u, w) {
                continue;
            }
            g.common_neighbors_into(u, w, &mut cn);
            if !common_neighborhood_confined(g, &cn, |x| s.contains(x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff every vertex of `cn` that has a non-neighbor in `cn` satisfies
/// `allowed`.
#[inline]
fn common_neighborhood_confined(g: &Graph, cn: &[u64], allowed: impl Fn(usize) -> bool) -> bool {
    for x in Ones::new(cn) {
        if allowed(x) {
            continue;
        }
        if has_non_neighbor_in(g, x, cn) {
            return false;
        }
    }
    true
}

#[inline]
fn has_non_neighbor_in(g: &Graph, x: usize, set: &[u64]) -> bool {
    let row = g.row(x);
    set.iter().zip(row).enumerate().any(|(i, (&s, &r))| {
        let mut rest = s & !r;
        if i == x / 64 {
            rest &= !(1u64 << (x % 64));
        }
        rest != 0
    })
}

/// Number of non-adjacent pairs inside `set`; any count above `limit` is
/// reported as `limit + 1`.
fn non_adjacent_pairs_in(g: &Graph, set: &[u64], limit: usize) -> usize {
    let mut twice = 0;
    for z in Ones::new(set) {
        // z itself is in set & !row(z)
        twice += set
            .iter()
            .zip(g.row(z))
            .map(|(&s, &r)| (s & !r).count_ones() as usize)
            .sum::<usize>()
            - 1;
        if twice > 2 * limit {
            return limit + 1;
        }
    }
    twice / 2
}

/// Morse test specialized to an induced cycle.
///
/// For `k >= 5` a cycle contains no square of its own, so it is Morse iff
/// every non-adjacent pair has a clique as common neighborhood. For `k = 4`
/// with diagonals `{u, w}` and `{x, y}` the only non-adjacent pair allowed
/// inside `link(u) ∩ link(w)` is `{x, y}`, and symmetrically.
pub fn is_morse_cycle(g: &Graph, c: &CycleWitness) -> Result<bool> {
    c.verify(g)?;
    Ok(is_morse_cycle_unchecked(g, c))
}

pub(crate) fn is_morse_cycle_unchecked(g: &Graph, c: &CycleWitness) -> bool {
    let v = c.vertices();
    let mut cn = vec![0u64; g.words()];
    match v.len() {
        0..=3 => true,
        4 => {
            // {x, y} is always a non-adjacent pair of link(u) ∩ link(w); it
            // must be the only one, for both diagonals.
            [(v[0], v[2]), (v[1], v[3])].iter().all(|&(a, b)| {
                g.common_neighbors_into(a, b, &mut cn);
                non_adjacent_pairs_in(g, &cn, 1) == 1
            })
        }
        _ => c.non_consecutive_pairs().all(|(a, b)| {
            g.common_neighbors_into(a, b, &mut cn);
            g.is_clique_words(&cn)
        }),
    }
}

/// Number of Morse induced `k`-cycles of `g`.
pub fn count_morse_cycles(g: &Graph, k: usize) -> Result<u64> {
    if k < 4 {
        return Err(Error::InvalidParameter(format!(
            "Morse cycles are counted for k >= 4, got {k}"
        )));
    }
    if k == 4 {
        return Ok(enumerate_induced_squares(g)
            .iter()
            .filter(|(c, _)| is_morse_cycle_unchecked(g, c))
            .count() as u64);
    }
    Ok(morse_cycles_pruned(g, k).count() as u64)
}

/// Literal implementation of the definition over all induced squares of a
/// graph, computed once and reused across queries.
pub struct MorseOracle<'g> {
    g: &'g Graph,
    squares: Vec<[usize; 4]>,
}

impl<'g> MorseOracle<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let squares = enumerate_induced_squares(g)
            .into_iter()
            .map(|(c, _)| {
                let v = c.vertices();
                [v[0], v[1], v[2], v[3]]
            })
            .collect();
        MorseOracle { g, squares }
    }

    pub fn square_count(&self) -> usize {
        self.squares.len()
    }

    pub fn is_morse(&self, s: &VertexSet) -> Result<bool> {
        check_members(self.g, s)?;
        for q in &self.squares {
            let inside: Vec<usize> = q.iter().copied().filter(|&v| s.contains(v)).collect();
            let meets_non_adjacent_pair = inside.iter().enumerate().any(|(i, &a)| {
                inside[i + 1..].iter().any(|&b| !self.g.has_edge(a, b))
            });
            if meets_non_adjacent_pair && inside.len() < 4 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One-shot form of [`MorseOracle::is_morse`].
pub fn morse_oracle(g: &Graph, s: &VertexSet) -> Result<bool> {
    MorseOracle::new(g).is_morse(s)
}
