use rayon::prelude::*;

use super::property::{Limits, Outcome, PropertyKind};
use crate::error::{Error, Result};
use crate::gnp::check_probability;
use crate::graph::Graph;

/// Largest `n` accepted by [`exhaustive_small_n_expectation`].
pub const EXHAUSTIVE_MAX_N: usize = 7;

/// Exact `E[X]` of a property over G(n, p), by evaluating it on all
/// `2^C(n,2)` labeled graphs. Booleans count as 0/1.
///
/// Outcomes are summed as integers per edge count, so the only rounding
/// happens in the final weighting by `p^m (1-p)^(M-m)`.
pub fn exhaustive_small_n_expectation(n: usize, p: f64, property: PropertyKind) -> Result<f64> {
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::TooLarge(n));
    }
    check_probability(p)?;
    let property = property.validate()?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m_total = pairs.len();
    let limits = Limits::default();

    let sums = (0u32..1 << m_total)
        .into_par_iter()
        .try_fold(
            || vec![0u64; m_total + 1],
            |mut acc, mask| -> Result<Vec<u64>> {
                let g = Graph::new(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e))?;
                let value = match property.evaluate(&g, limits)? {
                    Outcome::Bool(b) => u64::from(b),
                    Outcome::Count(c) => c,
                };
                acc[mask.count_ones() as usize] += value;
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0u64; m_total + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;

    Ok(sums
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(m, &s)| s as f64 * p.powi(m as i32) * (1.0 - p).powi((m_total - m) as i32))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::expected_morse_pentagons;

    #[test]
    fn exact_examples() {
        assert_eq!(
            exhaustive_small_n_expectation(5, 0.5, PropertyKind::MorseCycleCount(5)).unwrap(),
            12.0 / 1024.0
        );
        for prop in [
            PropertyKind::MorsePentagonExists,
            PropertyKind::MorseSquareExists,
            PropertyKind::Cfs,
            PropertyKind::InducedCycleCount(4),
        ] {
            assert_eq!(exhaustive_small_n_expectation(5, 0.0, prop).unwrap(), 0.0);
        }
        assert_eq!(exhaustive_small_n_expectation(4, 1.0, PropertyKind::MorseSquareExists).unwrap(), 0.0);
        assert!(matches!(
            exhaustive_small_n_expectation(8, 0.5, PropertyKind::Cfs),
            Err(Error::TooLarge(8))
        ));
    }

    #[test]
    fn matches_closed_forms_where_exact() {
        // on n = 5 the exclusion factor is empty, so the first moment is exact
        for p in [0.1, 0.3, 0.44] {
            let exact = exhaustive_small_n_expectation(5, p, PropertyKind::MorseCycleCount(5)).unwrap();
            assert!((exact - expected_morse_pentagons(5, p).unwrap()).abs() < 1e-15);
        }
        // induced 4-cycles on 4 vertices: 3 p⁴ (1-p)²
        let p: f64 = 0.35;
        let e = exhaustive_small_n_expectation(4, p, PropertyKind::InducedCycleCount(4)).unwrap();
        assert!((e - 3.0 * p.powi(4) * (1.0 - p).powi(2)).abs() < 1e-15);
        // P[X > 0] <= E[X]
        let count = exhaustive_small_n_expectation(6, 0.4, PropertyKind::MorseCycleCount(5)).unwrap();
        let exists = exhaustive_small_n_expectation(6, 0.4, PropertyKind::MorsePentagonExists).unwrap();
        assert!(exists <= count && exists > 0.0);
    }

    #[test]
    fn n7_value() {
        let e = exhaustive_small_n_expectation(7, 0.3, PropertyKind::MorseCycleCount(5)).unwrap();
        // C(7,5) · P[a fixed 5-set is a Morse pentagon], from exact rational
        // enumeration of the 10 + 11 edge indicators against the square list
        assert!((e - 0.05798316709013909).abs() < 1e-14);
        let mu5 = expected_morse_pentagons(7, 0.3).unwrap();
        // the definitional event is weaker than the closed form's exclusion
        assert!(e > mu5);
        assert!(e < 2.0 * mu5);
    }
}
