//! Cross-validation corpora shared by the `oracle` command and the
//! acceptance tests.

use rand_core::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use super::property::{Limits, Outcome, PropertyKind};
use super::stats::mean_and_variance;
use crate::analytic::lemma31;
use crate::cycles::enumerate_induced_cycles;
use crate::error::{Error, Result};
use crate::gnp::{sample_gnp, DensityPoint, Seed};
use crate::graph::{Graph, VertexSet};
use crate::morse::{count_morse_cycles, is_morse_subgraph, MorseOracle};
use crate::square::build_square_graph;

/// Graph `i` of a corpus: `n` cycles through `min_n..=max_n`, `p` through
/// 0.1..0.9 (advancing once per full round of `n`), seeded by
/// `seed.for_trial(i)`.
pub fn corpus_graph(i: u64, min_n: usize, max_n: usize, seed: Seed) -> Result<Graph> {
    if min_n > max_n {
        return Err(Error::InvalidParameter(format!("empty n range {min_n}..={max_n}")));
    }
    let span = (max_n - min_n + 1) as u64;
    let n = min_n + (i % span) as usize;
    let p = (1 + (i / span) % 9) as f64 / 10.0;
    sample_gnp(n, p, seed.for_trial(i))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub graphs: u64,
    pub cycles_checked: u64,
    pub subsets_checked: u64,
    pub mismatches: u64,
}

/// Compares the pairwise Morse test against the literal definition on every
/// induced cycle and `subsets` random vertex subsets of each corpus graph.
pub fn oracle_equivalence(graphs: u64, min_n: usize, max_n: usize, subsets: u64, seed: Seed) -> Result<EquivalenceReport> {
    let subset_seed = Seed(!seed.0);
    (0..graphs)
        .into_par_iter()
        .map(|i| {
            let g = corpus_graph(i, min_n, max_n, seed)?;
            let n = g.n();
            let oracle = MorseOracle::new(&g);
            let mut r = EquivalenceReport {
                graphs: 1,
                ..Default::default()
            };
            let check = |s: &VertexSet| -> Result<bool> {
                Ok(is_morse_subgraph(&g, s)? == oracle.is_morse(s)?)
            };
            for k in 3..=n {
                for c in enumerate_induced_cycles(&g, k) {
                    let s = VertexSet::from_vertices(n, c.vertices().iter().copied())?;
                    r.cycles_checked += 1;
                    r.mismatches += u64::from(!check(&s)?);
                }
            }
            let mut rng = subset_seed.for_trial(i).rng();
            for _ in 0..subsets {
                let bits = rng.next_u64();
                let s = VertexSet::from_vertices(n, (0..n).filter(|v| bits >> v & 1 == 1))?;
                r.subsets_checked += 1;
                r.mismatches += u64::from(!check(&s)?);
            }
            Ok(r)
        })
        .try_reduce(EquivalenceReport::default, |a, b| {
            Ok(EquivalenceReport {
                graphs: a.graphs + b.graphs,
                cycles_checked: a.cycles_checked + b.cycles_checked,
                subsets_checked: a.subsets_checked + b.subsets_checked,
                mismatches: a.mismatches + b.mismatches,
            })
        })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SquareIdentityReport {
    pub graphs: u64,
    pub squares: u64,
    pub morse_squares: u64,
    /// Graphs where MorseSquareExists and SquareIsolatedExists differ.
    pub existence_mismatches: u64,
    /// Graphs where the isolated count differs from the Morse 4-cycle count.
    pub count_mismatches: u64,
}

/// Checks, per corpus graph, that Morse squares are exactly the isolated
/// vertices of the square graph.
pub fn square_identity(graphs: u64, min_n: usize, max_n: usize, seed: Seed) -> Result<SquareIdentityReport> {
    let limits = Limits::default();
    (0..graphs)
        .into_par_iter()
        .map(|i| {
            let g = corpus_graph(i, min_n, max_n, seed)?;
            let sq = build_square_graph(&g)?;
            let morse = count_morse_cycles(&g, 4)?;
            let a = PropertyKind::MorseSquareExists.evaluate(&g, limits)?;
            let b = PropertyKind::SquareIsolatedExists.evaluate(&g, limits)?;
            Ok(SquareIdentityReport {
                graphs: 1,
                squares: sq.len() as u64,
                morse_squares: morse,
                existence_mismatches: u64::from(a != b),
                count_mismatches: u64::from(sq.isolated_count() as u64 != morse),
            })
        })
        .try_reduce(SquareIdentityReport::default, |a, b| {
            Ok(SquareIdentityReport {
                graphs: a.graphs + b.graphs,
                squares: a.squares + b.squares,
                morse_squares: a.morse_squares + b.morse_squares,
                existence_mismatches: a.existence_mismatches + b.existence_mismatches,
                count_mismatches: a.count_mismatches + b.count_mismatches,
            })
        })
}

/// A Monte Carlo estimate of a probability or mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub samples: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub reference: f64,
}

impl Estimate {
    /// Distance from the reference in standard errors.
    pub fn z_score(&self) -> f64 {
        (self.estimate - self.reference).abs() / self.std_error
    }
}

/// Estimates the conditional probability `lemma31(p, which)` by rejection
/// sampling the edge indicators `v w1 .. v w4` until `samples` draws satisfy
/// the condition. The standard error is that of a Bernoulli mean with the
/// exact probability.
pub fn lemma31_monte_carlo(p: f64, which: u8, samples: u64, seed: Seed) -> Result<Estimate> {
    let reference = lemma31(p, which)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let cut = ((p * 2f64.powi(64)) as u128).min(u64::MAX as u128) as u64;
    let mut rng = seed.rng();
    let mut e = [false; 4];
    let (mut accepted, mut hits) = (0u64, 0u64);
    while accepted < samples {
        for x in e.iter_mut() {
            *x = rng.next_u64() < cut;
        }
        let (given, event) = match which {
            1 => (!(e[0] && e[1]) && !(e[0] && e[2]), e[0]),
            2 => (!(e[1] && e[2]), e[0] && e[1]),
            _ => (!(e[0] && e[2]) && !(e[1] && e[3]), e[0] && e[1]),
        };
        if given {
            accepted += 1;
            hits += u64::from(event);
        }
    }
    let n = samples as f64;
    Ok(Estimate {
        samples,
        estimate: hits as f64 / n,
        std_error: (reference * (1.0 - reference) / n).sqrt(),
        reference,
    })
}

/// Mean of `property` over trials `0..trials` at `point`, with the sample
/// standard error, compared against `reference`.
pub fn monte_carlo_mean(
    point: &DensityPoint,
    property: PropertyKind,
    trials: u64,
    seed: Seed,
    reference: f64,
) -> Result<Estimate> {
    let limits = Limits::default();
    let values = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = sample_gnp(point.n, point.p, seed.for_trial(t))?;
            property.evaluate(&g, limits).map(Outcome::as_f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, var) = mean_and_variance(&values)
        .ok_or_else(|| Error::InvalidParameter("need at least one trial".into()))?;
    Ok(Estimate {
        samples: trials,
        estimate: mean,
        std_error: (var / trials as f64).sqrt(),
        reference,
    })
}
