use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cycles::{enumerate_induced_cycles, enumerate_induced_squares, morse_pruned_cycle_search_with_budget, CycleWitness, DEFAULT_SEARCH_BUDGET};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::morse::{count_morse_cycles, is_morse_cycle_unchecked};
use crate::square::{SquareGraph, DEFAULT_SQUARE_CAP};

/// A graph property measured by the harness. The string tags used in
/// configs, records and CLI flags are:
///
/// | tag | variant |
/// |---|---|
/// | `morse-pentagon-exists` | [`PropertyKind::MorsePentagonExists`] |
/// | `morse-cycle-exists:KMIN:KMAX` | [`PropertyKind::MorseCycleExists`] |
/// | `morse-square-exists` | [`PropertyKind::MorseSquareExists`] |
/// | `square-isolated-exists` | [`PropertyKind::SquareIsolatedExists`] |
/// | `square-graph-connected` | [`PropertyKind::SquareGraphConnected`] |
/// | `cfs` | [`PropertyKind::Cfs`] |
/// | `induced-cycle-count:K` | [`PropertyKind::InducedCycleCount`] |
/// | `morse-cycle-count:K` | [`PropertyKind::MorseCycleCount`] |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyKind {
    MorsePentagonExists,
    MorseCycleExists { kmin: usize, kmax: usize },
    MorseSquareExists,
    SquareIsolatedExists,
    SquareGraphConnected,
    Cfs,
    InducedCycleCount(usize),
    MorseCycleCount(usize),
}

/// Result of evaluating a property on one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Bool(bool),
    Count(u64),
}

impl Outcome {
    pub fn as_f64(self) -> f64 {
        match self {
            Outcome::Bool(b) => f64::from(u8::from(b)),
            Outcome::Count(c) => c as f64,
        }
    }
}

/// Resource limits applied while evaluating a property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub search_budget: u64,
    pub square_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search_budget: DEFAULT_SEARCH_BUDGET,
            square_cap: DEFAULT_SQUARE_CAP,
        }
    }
}

impl PropertyKind {
    /// Checks the cycle-length parameters.
    pub fn validate(self) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            PropertyKind::MorseCycleExists { kmin, kmax } if kmin < 4 || kmin > kmax => {
                bad(format!("need 4 <= kmin <= kmax, got {kmin}:{kmax}"))
            }
            PropertyKind::InducedCycleCount(k) if k < 3 => bad(format!("need k >= 3, got {k}")),
            PropertyKind::MorseCycleCount(k) if k < 4 => bad(format!("need k >= 4, got {k}")),
            p => Ok(p),
        }
    }

    /// Whether outcomes are counts rather than booleans.
    pub fn is_count(self) -> bool {
        matches!(self, PropertyKind::InducedCycleCount(_) | PropertyKind::MorseCycleCount(_))
    }

    pub fn evaluate(self, g: &Graph, limits: Limits) -> Result<Outcome> {
        self.evaluate_with_witness(g, limits).map(|(o, _)| o)
    }

    /// Evaluates the property and, for existence properties over cycles,
    /// returns a witness when the outcome is positive.
    pub fn evaluate_with_witness(self, g: &Graph, limits: Limits) -> Result<(Outcome, Option<CycleWitness>)> {
        use PropertyKind::*;
        let exists = |w: Option<CycleWitness>| (Outcome::Bool(w.is_some()), w);
        Ok(match self.validate()? {
            MorsePentagonExists => exists(morse_pruned_cycle_search_with_budget(g, 5, 5, limits.search_budget)?),
            MorseCycleExists { kmin, kmax } => {
                exists(morse_pruned_cycle_search_with_budget(g, kmin, kmax, limits.search_budget)?)
            }
            // read off the square list directly, without the square graph
            MorseSquareExists => exists(
                enumerate_induced_squares(g)
                    .into_iter()
                    .map(|(c, _)| c)
                    .find(|c| is_morse_cycle_unchecked(g, c)),
            ),
            SquareIsolatedExists => {
                let sq = SquareGraph::with_capacity(g, limits.square_cap)?;
                exists((0..sq.len()).find(|&i| sq.is_isolated(i)).map(|i| {
                    CycleWitness::from_cycle(sq.square(i).to_vec()).expect("a listed square is a valid cycle")
                }))
            }
            SquareGraphConnected => {
                let sq = SquareGraph::with_capacity(g, limits.square_cap)?;
                (Outcome::Bool(sq.is_connected()), None)
            }
            Cfs => {
                let sq = SquareGraph::with_capacity(g, limits.square_cap)?;
                (Outcome::Bool(sq.is_cfs()), None)
            }
            InducedCycleCount(k) => (Outcome::Count(enumerate_induced_cycles(g, k).count() as u64), None),
            MorseCycleCount(k) => (Outcome::Count(count_morse_cycles(g, k)?), None),
        })
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyKind::MorsePentagonExists => f.write_str("morse-pentagon-exists"),
            PropertyKind::MorseCycleExists { kmin, kmax } => write!(f, "morse-cycle-exists:{kmin}:{kmax}"),
            PropertyKind::MorseSquareExists => f.write_str("morse-square-exists"),
            PropertyKind::SquareIsolatedExists => f.write_str("square-isolated-exists"),
            PropertyKind::SquareGraphConnected => f.write_str("square-graph-connected"),
            PropertyKind::Cfs => f.write_str("cfs"),
            PropertyKind::InducedCycleCount(k) => write!(f, "induced-cycle-count:{k}"),
            PropertyKind::MorseCycleCount(k) => write!(f, "morse-cycle-count:{k}"),
        }
    }
}

impl FromStr for PropertyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let num = |a: &str| {
            a.parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad cycle length `{a}` in property `{s}`")))
        };
        let arity = |want: usize| {
            if args.len() == want {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "property `{name}` takes {want} parameter(s), got `{s}`"
                )))
            }
        };
        let kind = match name {
            "morse-pentagon-exists" => arity(0).map(|_| PropertyKind::MorsePentagonExists),
            "morse-cycle-exists" => arity(2).and_then(|_| {
                Ok(PropertyKind::MorseCycleExists {
                    kmin: num(args[0])?,
                    kmax: num(args[1])?,
                })
            }),
            "morse-square-exists" => arity(0).map(|_| PropertyKind::MorseSquareExists),
            "square-isolated-exists" => arity(0).map(|_| PropertyKind::SquareIsolatedExists),
            "square-graph-connected" => arity(0).map(|_| PropertyKind::SquareGraphConnected),
            "cfs" => arity(0).map(|_| PropertyKind::Cfs),
            "induced-cycle-count" => arity(1).and_then(|_| Ok(PropertyKind::InducedCycleCount(num(args[0])?))),
            "morse-cycle-count" => arity(1).and_then(|_| Ok(PropertyKind::MorseCycleCount(num(args[0])?))),
            _ => Err(Error::InvalidParameter(format!("unknown property `{s}`"))),
        }?;
        kind.validate()
    }
}

impl Serialize for PropertyKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PropertyKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnp::{sample_gnp, Seed};
    use crate::square::build_square_graph;

    #[test]
    fn tags_round_trip() {
        let all = [
            PropertyKind::MorsePentagonExists,
            PropertyKind::MorseCycleExists { kmin: 5, kmax: 8 },
            PropertyKind::MorseSquareExists,
            PropertyKind::SquareIsolatedExists,
            PropertyKind::SquareGraphConnected,
            PropertyKind::Cfs,
            PropertyKind::InducedCycleCount(3),
            PropertyKind::MorseCycleCount(5),
        ];
        for p in all {
            assert_eq!(p.to_string().parse::<PropertyKind>().unwrap(), p);
            let json = serde_json::to_string(&p).unwrap();
            assert_eq!(serde_json::from_str::<PropertyKind>(&json).unwrap(), p);
        }
        assert_eq!(
            "morse-cycle-exists:5:8".parse::<PropertyKind>().unwrap(),
            PropertyKind::MorseCycleExists { kmin: 5, kmax: 8 }
        );
    }

    #[test]
    fn bad_tags() {
        for s in [
            "",
            "morse",
            "cfs:1",
            "morse-cycle-exists:5",
            "morse-cycle-exists:3:8",
            "morse-cycle-exists:6:5",
            "morse-cycle-exists:a:5",
            "induced-cycle-count:2",
            "morse-cycle-count:3",
            "induced-cycle-count",
        ] {
            assert!(s.parse::<PropertyKind>().is_err(), "{s}");
        }
    }

    #[test]
    fn evaluation_examples() {
        let lim = Limits::default();
        let k5 = Graph::complete(5);
        assert_eq!(PropertyKind::MorsePentagonExists.evaluate(&k5, lim).unwrap(), Outcome::Bool(false));
        let c5 = Graph::cycle(5).unwrap();
        let (o, w) = PropertyKind::MorsePentagonExists.evaluate_with_witness(&c5, lim).unwrap();
        assert_eq!(o, Outcome::Bool(true));
        assert_eq!(w.unwrap().vertices(), &[0, 1, 2, 3, 4]);
        assert_eq!(PropertyKind::Cfs.evaluate(&Graph::empty(5), lim).unwrap(), Outcome::Bool(false));
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(PropertyKind::Cfs.evaluate(&c4, lim).unwrap(), Outcome::Bool(true));
        assert_eq!(PropertyKind::SquareGraphConnected.evaluate(&c4, lim).unwrap(), Outcome::Bool(true));
        assert_eq!(PropertyKind::InducedCycleCount(5).evaluate(&c5, lim).unwrap(), Outcome::Count(1));
        assert_eq!(PropertyKind::MorseCycleCount(4).evaluate(&c4, lim).unwrap(), Outcome::Count(1));
        let tight = Limits { square_cap: 0, ..lim };
        assert!(matches!(
            PropertyKind::Cfs.evaluate(&c4, tight),
            Err(Error::CapacityExceeded { cap: 0 })
        ));
    }

    #[test]
    fn square_properties_agree() {
        let lim = Limits::default();
        for t in 0..100 {
            let n = 5 + (t as usize % 36);
            let g = sample_gnp(n, 0.1 + 0.1 * (t % 9) as f64, Seed(77).for_trial(t)).unwrap();
            let a = PropertyKind::MorseSquareExists.evaluate(&g, lim).unwrap();
            let b = PropertyKind::SquareIsolatedExists.evaluate(&g, lim).unwrap();
            assert_eq!(a, b);
            let count = PropertyKind::MorseCycleCount(4).evaluate(&g, lim).unwrap();
            assert_eq!(count, Outcome::Count(build_square_graph(&g).unwrap().isolated_count() as u64));
        }
    }

    #[test]
    fn outcome_json() {
        assert_eq!(serde_json::to_string(&Outcome::Bool(true)).unwrap(), "true");
        assert_eq!(serde_json::to_string(&Outcome::Count(7)).unwrap(), "7");
        assert_eq!(serde_json::from_str::<Outcome>("12").unwrap(), Outcome::Count(12));
    }
}
