//! Seeded Erdős–Rényi G(n, p) sampling and the `c·√(ln n / n)` density
//! schedule.
//!
//! Generator, pinned for reproducibility:
//!
//! * per-trial seed: `master ^ (trial + 1).wrapping_mul(0x9E3779B97F4A7C15)`;
//! * state: xoshiro256** whose four state words are the first four outputs
//!   of splitmix64 started at the per-trial seed;
//! * pairs `(u, v)`, `u < v`, are visited in lexicographic order and each
//!   consumes exactly one 64-bit output `U`; the edge is present iff
//!   `U / 2^64 < p`, evaluated exactly in integer arithmetic.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Builder, Graph};

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Independent seed for trial `trial` of a run started from `self`.
    pub fn for_trial(self, trial: u64) -> Seed {
        Seed(self.0 ^ trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
    }

    pub fn rng(self) -> Xoshiro256StarStar {
        Xoshiro256StarStar::seed_from_u64(self.0)
    }
}

/// An edge probability, optionally derived from a coefficient `c` through
/// `p = min(1, c·√(ln n / n))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub n: usize,
    pub c: Option<f64>,
    pub p: f64,
}

impl DensityPoint {
    pub fn explicit(n: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(DensityPoint { n, c: None, p })
    }
}

pub fn density_from_coefficient(c: f64, n: usize) -> Result<DensityPoint> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if !c.is_finite() || c < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coefficient must be finite and non-negative, got {c}"
        )));
    }
    let nf = n as f64;
    let p = (c * (nf.ln() / nf).sqrt()).min(1.0);
    Ok(DensityPoint { n, c: Some(c), p })
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("probability must lie in [0, 1], got {p}")))
    }
}

/// Integer cut-off `t` such that `U / 2^64 < p  <=>  U < t` for every `U: u64`.
#[inline]
fn acceptance_cutoff(p: f64) -> u128 {
    // p * 2^64 is exact in f64 (power-of-two scaling); U is an integer, so
    // U < x  <=>  U < ceil(x).
    (p * 18_446_744_073_709_551_616.0).ceil() as u128
}

/// One G(n, p) draw. Identical `(n, p, seed)` give identical graphs.
pub fn sample_gnp(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    check_probability(p)?;
    let cutoff = acceptance_cutoff(p);
    let mut rng = seed.rng();
    let mut b = Builder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if (rng.next_u64() as u128) < cutoff {
                b.add_edge(u, v);
            }
        }
    }
    Ok(b.finish())
}
