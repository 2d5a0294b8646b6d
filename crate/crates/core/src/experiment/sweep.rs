use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{Map, Value};

use super::property::{Limits, PropertyKind};
use super::stats::CellSummary;
use super::trial::{run_trial, TrialRecord};
use crate::analytic::{expected_morse_pentagons, expected_morse_squares, long_cycle_bound, thresholds};
use crate::error::{Error, Result};
use crate::gnp::{density_from_coefficient, DensityPoint, Seed};

/// How densities are specified for a sweep.
#[derive(Clone, Debug, PartialEq)]
pub enum Densities {
    /// `p = min(1, c·√(ln n / n))` for each `c`.
    Coefficients(Vec<f64>),
    /// Explicit edge probabilities.
    Probabilities(Vec<f64>),
}

/// A sweep over the grid `ns × densities × properties`.
///
/// JSON form:
///
/// ```json
/// {"ns": [256, 512], "coefficients": [0.5], "properties": ["morse-pentagon-exists"],
///  "trials": 100, "seed": 1, "z": 1.96, "out": "runs/pentagons.jsonl"}
/// ```
///
/// `ps` may replace `coefficients`; `z` defaults to 1.96. Optional
/// `search_budget` and `square_cap` override the evaluation limits.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub densities: Densities,
    pub properties: Vec<PropertyKind>,
    pub trials: u64,
    pub seed: u64,
    pub z: f64,
    pub out: PathBuf,
    pub limits: Limits,
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::config(name, "missing"))
}

fn as_u64(v: &Value, name: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::config(name, format!("expected a non-negative integer, got {v}")))
}

fn as_array<'a>(v: &'a Value, name: &str) -> Result<&'a Vec<Value>> {
    let a = v.as_array().ok_or_else(|| Error::config(name, format!("expected an array, got {v}")))?;
    if a.is_empty() {
        return Err(Error::config(name, "must not be empty"));
    }
    Ok(a)
}

fn as_f64(v: &Value, name: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::config(name, format!("expected a number, got {v}")))
}

impl SweepConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::config("<document>", e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::config("<document>", "expected a JSON object"))?;
        const KNOWN: [&str; 10] =
            ["ns", "coefficients", "ps", "properties", "trials", "seed", "z", "out", "search_budget", "square_cap"];
        if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(Error::config(k, "unknown field"));
        }

        let ns = as_array(field(obj, "ns")?, "ns")?
            .iter()
            .map(|v| {
                let n = as_u64(v, "ns")? as usize;
                if n < 2 {
                    return Err(Error::config("ns", format!("n must be at least 2, got {n}")));
                }
                Ok(n)
            })
            .collect::<Result<Vec<_>>>()?;

        let densities = match (obj.get("coefficients"), obj.get("ps")) {
            (Some(_), Some(_)) => return Err(Error::config("ps", "give either coefficients or ps, not both")),
            (None, None) => return Err(Error::config("coefficients", "missing (or give ps)")),
            (Some(v), None) => Densities::Coefficients(
                as_array(v, "coefficients")?
                    .iter()
                    .map(|x| {
                        let c = as_f64(x, "coefficients")?;
                        if c < 0.0 {
                            return Err(Error::config("coefficients", format!("must be non-negative, got {c}")));
                        }
                        Ok(c)
                    })
                    .collect::<Result<_>>()?,
            ),
            (None, Some(v)) => Densities::Probabilities(
                as_array(v, "ps")?
                    .iter()
                    .map(|x| {
                        let p = as_f64(x, "ps")?;
                        if !(0.0..=1.0).contains(&p) {
                            return Err(Error::config("ps", format!("must lie in [0, 1], got {p}")));
                        }
                        Ok(p)
                    })
                    .collect::<Result<_>>()?,
            ),
        };

        let properties = as_array(field(obj, "properties")?, "properties")?
            .iter()
            .map(|v| {
                let s = v
                    .as_str()
                    .ok_or_else(|| Error::config("properties", format!("expected a string, got {v}")))?;
                s.parse::<PropertyKind>().map_err(|e| Error::config("properties", e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;

        let trials = as_u64(field(obj, "trials")?, "trials")?;
        if trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        let seed = as_u64(field(obj, "seed")?, "seed")?;
        let z = match obj.get("z") {
            None => 1.96,
            Some(v) => {
                let z = as_f64(v, "z")?;
                if !z.is_finite() || z <= 0.0 {
                    return Err(Error::config("z", format!("must be positive, got {z}")));
                }
                z
            }
        };
        let out = field(obj, "out")?
            .as_str()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::config("out", "expected a non-empty path string"))?;

        let mut limits = Limits::default();
        if let Some(v) = obj.get("search_budget") {
            limits.search_budget = as_u64(v, "search_budget")?;
        }
        if let Some(v) = obj.get("square_cap") {
            limits.square_cap = as_u64(v, "square_cap")? as usize;
        }

        Ok(SweepConfig {
            ns,
            densities,
            properties,
            trials,
            seed,
            z,
            out: PathBuf::from(out),
            limits,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Path of the summary CSV: the JSONL path with its extension replaced
    /// by `summary.csv`.
    pub fn summary_path(&self) -> PathBuf {
        self.out.with_extension("summary.csv")
    }

    /// Density points for every `n`, in grid order.
    pub fn points(&self) -> Result<Vec<DensityPoint>> {
        let mut out = Vec::new();
        for &n in &self.ns {
            match &self.densities {
                Densities::Coefficients(cs) => {
                    for &c in cs {
                        out.push(density_from_coefficient(c, n)?);
                    }
                }
                Densities::Probabilities(ps) => {
                    for &p in ps {
                        out.push(DensityPoint::explicit(n, p)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// First-moment or threshold value paired with a property, when one is
/// defined at these parameters.
pub fn analytic_reference(point: &DensityPoint, property: PropertyKind) -> Option<f64> {
    let (n, p) = (point.n, point.p);
    match property {
        PropertyKind::MorsePentagonExists | PropertyKind::MorseCycleCount(5) => expected_morse_pentagons(n, p).ok(),
        PropertyKind::MorseSquareExists | PropertyKind::SquareIsolatedExists | PropertyKind::MorseCycleCount(4) => {
            expected_morse_squares(n, p).ok()
        }
        PropertyKind::MorseCycleExists { .. } => thresholds(n).ok().map(|t| t.pentagon),
        PropertyKind::SquareGraphConnected => thresholds(n).ok().map(|t| t.square),
        PropertyKind::Cfs => thresholds(n).ok().map(|t| t.cfs),
        PropertyKind::InducedCycleCount(k) => long_cycle_bound(n, p, k).ok(),
        PropertyKind::MorseCycleCount(_) => None,
    }
}

/// Runs trials `0..trials` of one cell on the current rayon pool and
/// returns the records in trial order.
pub fn run_cell(
    point: &DensityPoint,
    property: PropertyKind,
    trials: u64,
    seed: Seed,
    limits: Limits,
) -> Result<Vec<TrialRecord>> {
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(point, property, seed, t, limits))
        .collect()
}

/// Runs a cell and folds it into a summary.
pub fn run_cell_summary(
    point: &DensityPoint,
    property: PropertyKind,
    trials: u64,
    seed: Seed,
    limits: Limits,
    z: f64,
) -> Result<CellSummary> {
    let records = run_cell(point, property, trials, seed, limits)?;
    CellSummary::from_records(&records, z, analytic_reference(point, property))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub cells: Vec<CellSummary>,
    pub jsonl: PathBuf,
    pub csv: PathBuf,
}

/// Evaluates every cell with `workers` threads, writing one JSONL line per
/// trial (cells in grid order, trials in index order) and then the summary
/// CSV. The output does not depend on `workers`.
///
/// A cell with more than 1% errored trials fails the sweep after its
/// records have been written.
pub fn run_sweep(config: &SweepConfig, workers: usize) -> Result<SweepSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    let points = config.points()?;
    let csv_path = config.summary_path();
    let mut jsonl = BufWriter::new(File::create(&config.out)?);
    let mut cells = Vec::new();
    let seed = Seed(config.seed);

    for point in &points {
        for &property in &config.properties {
            let records = pool.install(|| run_cell(point, property, config.trials, seed, config.limits))?;
            for r in &records {
                writeln!(jsonl, "{}", r.to_json())?;
            }
            let summary = CellSummary::from_records(&records, config.z, analytic_reference(point, property))?;
            if summary.errors * 100 > config.trials {
                jsonl.flush()?;
                return Err(Error::ErroredTrials {
                    cell: format!("n={} p={} {}", point.n, point.p, property),
                    errors: summary.errors,
                    trials: config.trials,
                });
            }
            cells.push(summary);
        }
    }
    jsonl.flush()?;

    let mut w = csv::Writer::from_path(&csv_path).map_err(csv_error)?;
    for cell in &cells {
        w.serialize(cell).map_err(csv_error)?;
    }
    w.flush()?;

    Ok(SweepSummary {
        cells,
        jsonl: config.out.clone(),
        csv: csv_path,
    })
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::trial::strip_elapsed;

    fn config_json(out: &Path, extra: &str) -> String {
        format!(
            r#"{{"ns":[12,20],"coefficients":[0.6,1.2],"properties":["morse-pentagon-exists","morse-cycle-count:4","cfs"],"trials":6,"seed":5,"out":{}{extra}}}"#,
            serde_json::to_string(out.to_str().unwrap()).unwrap()
        )
    }

    #[test]
    fn config_errors_name_the_field() {
        let cases = [
            (r#"{"ns":[10],"coefficients":[0.5],"properties":["cfs"],"trials":0,"seed":1,"out":"x"}"#, "trials"),
            (r#"{"ns":[],"coefficients":[0.5],"properties":["cfs"],"trials":1,"seed":1,"out":"x"}"#, "ns"),
            (r#"{"ns":[1],"coefficients":[0.5],"properties":["cfs"],"trials":1,"seed":1,"out":"x"}"#, "ns"),
            (r#"{"ns":[10],"properties":["cfs"],"trials":1,"seed":1,"out":"x"}"#, "coefficients"),
            (r#"{"ns":[10],"ps":[1.5],"properties":["cfs"],"trials":1,"seed":1,"out":"x"}"#, "ps"),
            (r#"{"ns":[10],"ps":[0.5],"coefficients":[1],"properties":["cfs"],"trials":1,"seed":1,"out":"x"}"#, "ps"),
            (r#"{"ns":[10],"ps":[0.5],"properties":["nope"],"trials":1,"seed":1,"out":"x"}"#, "properties"),
            (r#"{"ns":[10],"ps":[0.5],"properties":["cfs"],"trials":1,"seed":-1,"out":"x"}"#, "seed"),
            (r#"{"ns":[10],"ps":[0.5],"properties":["cfs"],"trials":1,"seed":1,"z":0,"out":"x"}"#, "z"),
            (r#"{"ns":[10],"ps":[0.5],"properties":["cfs"],"trials":1,"seed":1}"#, "out"),
            (r#"{"ns":[10],"ps":[0.5],"properties":["cfs"],"trials":1,"seed":1,"out":"x","extra":1}"#, "extra"),
        ];
        for (text, want) in cases {
            match SweepConfig::from_json_str(text) {
                Err(Error::Config { field, .. }) => assert_eq!(field, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn config_defaults() {
        let c = SweepConfig::from_json_str(
            r#"{"ns":[10],"ps":[0.5],"properties":["morse-cycle-exists:5:8"],"trials":3,"seed":1,"out":"a/b.jsonl"}"#,
        )
        .unwrap();
        assert_eq!(c.z, 1.96);
        assert_eq!(c.limits, Limits::default());
        assert_eq!(c.summary_path(), PathBuf::from("a/b.summary.csv"));
        assert_eq!(c.properties, vec![PropertyKind::MorseCycleExists { kmin: 5, kmax: 8 }]);
    }

    #[test]
    fn sweep_is_worker_independent() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.jsonl");
        let b = dir.path().join("b.jsonl");
        let ca = SweepConfig::from_json_str(&config_json(&a, "")).unwrap();
        let cb = SweepConfig::from_json_str(&config_json(&b, "")).unwrap();
        let sa = run_sweep(&ca, 1).unwrap();
        let sb = run_sweep(&cb, 4).unwrap();
        assert_eq!(sa.cells, sb.cells);
        let la = std::fs::read_to_string(&a).unwrap();
        let lb = std::fs::read_to_string(&b).unwrap();
        assert_eq!(la.lines().count(), 2 * 2 * 3 * 6);
        for (x, y) in la.lines().zip(lb.lines()) {
            assert_eq!(strip_elapsed(x), strip_elapsed(y));
        }
        let csv = std::fs::read_to_string(dir.path().join("a.summary.csv")).unwrap();
        let mut rows = csv.lines();
        assert_eq!(
            rows.next().unwrap(),
            "n,c,p,property,trials,successes_or_mean,estimate,wilson_lo,wilson_hi,analytic_ref,errors,variance"
        );
        assert_eq!(rows.count(), 12);
        for cell in &sa.cells {
            if let (Some(lo), Some(e), Some(hi)) = (cell.wilson_lo, cell.estimate, cell.wilson_hi) {
                assert!(lo <= e && e <= hi);
            }
        }
    }

    #[test]
    fn errored_cells_fail() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("e.jsonl");
        let cfg = SweepConfig::from_json_str(&config_json(&out, r#","square_cap":0"#)).unwrap();
        assert!(matches!(run_sweep(&cfg, 2), Err(Error::ErroredTrials { .. })));
        // records up to the failing cell are kept
        assert!(std::fs::read_to_string(&out).unwrap().lines().count() >= 6);
    }

    #[test]
    fn unwritable_output() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("missing").join("x.jsonl");
        let cfg = SweepConfig::from_json_str(&config_json(&out, "")).unwrap();
        assert!(matches!(run_sweep(&cfg, 1), Err(Error::Io(_))));
    }

    #[test]
    fn references() {
        let pt = density_from_coefficient(0.5, 256).unwrap();
        let mu5 = analytic_reference(&pt, PropertyKind::MorsePentagonExists).unwrap();
        assert!((mu5 - 158.4876).abs() < 1e-2);
        assert_eq!(analytic_reference(&pt, PropertyKind::MorseCycleCount(6)), None);
        let dense = DensityPoint::explicit(20, 0.9).unwrap();
        assert_eq!(analytic_reference(&dense, PropertyKind::MorseSquareExists), None);
    }
}
