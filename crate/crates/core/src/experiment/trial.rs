use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::property::{Limits, Outcome, PropertyKind};
use crate::error::Result;
use crate::gnp::{sample_gnp, DensityPoint, Seed};

/// One evaluated trial. Serialized as a JSON object with keys in field
/// order; `elapsed_ms` comes last so records can be compared byte for byte
/// up to that key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub c: Option<f64>,
    pub p: f64,
    pub property: PropertyKind,
    /// Master seed of the run; the graph seed is `seed.for_trial(trial)`.
    pub seed: u64,
    pub trial: u64,
    pub outcome: Option<Outcome>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl TrialRecord {
    /// JSON line without the trailing newline.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trial records always serialize")
    }
}

/// The deterministic part of a JSONL line: everything before `elapsed_ms`.
pub fn strip_elapsed(line: &str) -> &str {
    line.rfind(",\"elapsed_ms\":").map_or(line, |i| &line[..i])
}

/// Samples the graph of trial `trial` and evaluates `property` on it.
///
/// Errors that concern this graph only (square cap, search budget) are
/// recorded in the `error` field with `outcome` left empty.
pub fn run_trial(
    point: &DensityPoint,
    property: PropertyKind,
    master_seed: Seed,
    trial: u64,
    limits: Limits,
) -> Result<TrialRecord> {
    let property = property.validate()?;
    let start = Instant::now();
    let g = sample_gnp(point.n, point.p, master_seed.for_trial(trial))?;
    let (outcome, error) = match property.evaluate(&g, limits) {
        Ok(o) => (Some(o), None),
        Err(e) => (None, Some(e.tag().to_string())),
    };
    let elapsed_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    Ok(TrialRecord {
        n: point.n,
        c: point.c,
        p: point.p,
        property,
        seed: master_seed.0,
        trial,
        outcome,
        error,
        elapsed_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnp::density_from_coefficient;

    #[test]
    fn trial_examples() {
        let lim = Limits::default();
        let full = DensityPoint::explicit(5, 1.0).unwrap();
        let r = run_trial(&full, PropertyKind::MorsePentagonExists, Seed(11), 0, lim).unwrap();
        assert_eq!(r.outcome, Some(Outcome::Bool(false)));
        let none = DensityPoint::explicit(5, 0.0).unwrap();
        let r = run_trial(&none, PropertyKind::Cfs, Seed(11), 4, lim).unwrap();
        assert_eq!(r.outcome, Some(Outcome::Bool(false)));
        assert_eq!(r.error, None);
    }

    #[test]
    fn record_layout() {
        let point = density_from_coefficient(0.5, 30).unwrap();
        let a = run_trial(&point, PropertyKind::MorseCycleCount(5), Seed(9), 3, Limits::default()).unwrap();
        let b = run_trial(&point, PropertyKind::MorseCycleCount(5), Seed(9), 3, Limits::default()).unwrap();
        let (la, lb) = (a.to_json(), b.to_json());
        assert_eq!(strip_elapsed(&la), strip_elapsed(&lb));
        let keys: Vec<String> = serde_json::from_str::<serde_json::Map<String, serde_json::Value>>(&la)
            .unwrap()
            .keys()
            .cloned()
            .collect();
        assert!(la.starts_with("{\"n\":30,\"c\":0.5,\"p\":"));
        assert!(la.contains(",\"property\":\"morse-cycle-count:5\",\"seed\":9,\"trial\":3,\"outcome\":"));
        assert!(la.contains(",\"error\":null,\"elapsed_ms\":"));
        assert_eq!(keys.len(), 9);
        let back: TrialRecord = serde_json::from_str(&la).unwrap();
        assert_eq!(back.outcome, a.outcome);
    }

    #[test]
    fn errors_are_recorded() {
        let c4ish = DensityPoint::explicit(12, 0.5).unwrap();
        let lim = Limits { square_cap: 0, ..Limits::default() };
        let r = run_trial(&c4ish, PropertyKind::SquareIsolatedExists, Seed(1), 0, lim).unwrap();
        assert_eq!(r.outcome, None);
        assert_eq!(r.error.as_deref(), Some("capacity-exceeded"));
        let lim = Limits { search_budget: 0, ..Limits::default() };
        let r = run_trial(&c4ish, PropertyKind::MorsePentagonExists, Seed(1), 0, lim).unwrap();
        assert_eq!(r.error.as_deref(), Some("budget-exceeded"));
    }
}
