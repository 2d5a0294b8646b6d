use serde::Serialize;

use super::property::PropertyKind;
use super::trial::TrialRecord;
use crate::error::{Error, Result};

/// Wilson score interval for `successes` out of `trials` at normal
/// quantile `z`. The bounds are clamped so that
/// `0 <= lo <= successes / trials <= hi <= 1` also under rounding.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameter("wilson interval needs at least one trial".into()));
    }
    if successes > trials {
        return Err(Error::InvalidParameter(format!(
            "successes ({successes}) exceed trials ({trials})"
        )));
    }
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::InvalidParameter(format!("z must be positive and finite, got {z}")));
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).clamp(0.0, phat) };
    let hi = if successes == trials { 1.0 } else { (center + half).clamp(phat, 1.0) };
    Ok((lo, hi))
}

/// Sample mean and unbiased sample variance (0 for fewer than two values).
pub fn mean_and_variance(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() < 2 {
        0.0
    } else {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    };
    Some((mean, var))
}

/// Aggregate of one (n, density, property) cell; one CSV row.
///
/// Errored trials are left out of every estimate and counted in `errors`.
/// For counts, `successes_or_mean` and `estimate` hold the mean and the
/// Wilson columns are empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: usize,
    pub c: Option<f64>,
    pub p: f64,
    pub property: PropertyKind,
    pub trials: u64,
    pub successes_or_mean: Option<f64>,
    pub estimate: Option<f64>,
    pub wilson_lo: Option<f64>,
    pub wilson_hi: Option<f64>,
    pub analytic_ref: Option<f64>,
    pub errors: u64,
    pub variance: Option<f64>,
}

impl CellSummary {
    /// Folds trial records of a single cell, in trial order.
    pub fn from_records(records: &[TrialRecord], z: f64, analytic_ref: Option<f64>) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::InvalidParameter("cannot summarize an empty cell".into()))?;
        let values: Vec<f64> = records.iter().filter_map(|r| r.outcome.map(|o| o.as_f64())).collect();
        let valid = values.len() as u64;
        let errors = records.len() as u64 - valid;
        let mut s = CellSummary {
            n: first.n,
            c: first.c,
            p: first.p,
            property: first.property,
            trials: valid,
            successes_or_mean: None,
            estimate: None,
            wilson_lo: None,
            wilson_hi: None,
            analytic_ref,
            errors,
            variance: None,
        };
        if valid == 0 {
            return Ok(s);
        }
        if first.property.is_count() {
            let (mean, var) = mean_and_variance(&values).expect("non-empty");
            s.successes_or_mean = Some(mean);
            s.estimate = Some(mean);
            s.variance = Some(var);
        } else {
            let successes = values.iter().filter(|&&v| v > 0.0).count() as u64;
            let (lo, hi) = wilson_interval(successes, valid, z)?;
            s.successes_or_mean = Some(successes as f64);
            s.estimate = Some(successes as f64 / valid as f64);
            s.wilson_lo = Some(lo);
            s.wilson_hi = Some(hi);
        }
        Ok(s)
    }

    /// Standard error of the mean for count cells.
    pub fn std_error(&self) -> Option<f64> {
        self.variance.map(|v| (v / self.trials as f64).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn near(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12
    }

    #[test]
    fn wilson_examples() {
        assert!(near(wilson_interval(0, 100, 1.96).unwrap(), (0.0, 0.0369948074760019)));
        assert!(near(
            wilson_interval(50, 100, 1.96).unwrap(),
            (0.403829828590147, 0.596170171409853)
        ));
        assert!(near(wilson_interval(100, 100, 1.96).unwrap(), (0.963005192523998, 1.0)));
        assert!(near(
            wilson_interval(7, 20, 1.0).unwrap(),
            (0.252814750951397, 0.461470963334317)
        ));
        assert!(wilson_interval(0, 0, 1.96).is_err());
        assert!(wilson_interval(5, 4, 1.96).is_err());
        assert!(wilson_interval(1, 4, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn wilson_contains_estimate(trials in 1u64..5000, frac in 0.0f64..=1.0, z in 0.01f64..6.0) {
            let s = ((trials as f64) * frac).round() as u64;
            let (lo, hi) = wilson_interval(s, trials, z).unwrap();
            let phat = s as f64 / trials as f64;
            prop_assert!(0.0 <= lo && lo <= phat && phat <= hi && hi <= 1.0);
        }

        #[test]
        fn wilson_symmetric(trials in 1u64..2000, frac in 0.0f64..=1.0) {
            let s = ((trials as f64) * frac).round() as u64;
            let (lo, hi) = wilson_interval(s, trials, 1.96).unwrap();
            let (lo2, hi2) = wilson_interval(trials - s, trials, 1.96).unwrap();
            prop_assert!((lo - (1.0 - hi2)).abs() < 1e-12 && (hi - (1.0 - lo2)).abs() < 1e-12);
        }
    }

    #[test]
    fn moments() {
        assert_eq!(mean_and_variance(&[]), None);
        assert_eq!(mean_and_variance(&[3.0]), Some((3.0, 0.0)));
        let (m, v) = mean_and_variance(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
    }
}
