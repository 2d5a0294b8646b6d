//! Closed-form first-moment quantities for G(n, p).
//!
//! Products with large exponents are evaluated as sums of logarithms so
//! that factors like `(1 - 5p²)^(n-5)` do not underflow at experiment
//! scales.

use serde::Serialize;
use statrs::function::factorial::{ln_binomial, ln_factorial};

use crate::error::{Error, Result};
use crate::gnp::check_probability;

/// `exponent * ln(base)` with the convention `x^0 = 1`, also for `x = 0`.
fn ln_pow(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * base.ln()
    }
}

/// `exponent * ln(1 - x)`, accurate for small `x`.
fn ln_pow_1m(x: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * (-x).ln_1p()
    }
}

fn ln_choose(n: usize, k: usize) -> f64 {
    ln_binomial(n as u64, k as u64)
}

fn check_open_probability(p: f64) -> Result<()> {
    if (0.0..1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must lie in [0, 1), got {p}")))
    }
}

/// Conditional link probabilities for a vertex `v` and distinct
/// `w1..w4`, writing `e_i` for the edge `v w_i`:
///
/// 1. `P[e1 | ¬(e1 ∧ e2) ∧ ¬(e1 ∧ e3)] = p(1-p) / (1+p-p²)`
/// 2. `P[e1 ∧ e2 | ¬(e2 ∧ e3)] = p² / (1+p)`
/// 3. `P[e1 ∧ e2 | ¬(e1 ∧ e3) ∧ ¬(e2 ∧ e4)] = p² / (1+p)²`
pub fn lemma31(p: f64, which: u8) -> Result<f64> {
    check_open_probability(p)?;
    match which {
        1 => Ok(p * (1.0 - p) / (1.0 + p - p * p)),
        2 => Ok(p * p / (1.0 + p)),
        3 => Ok(p * p / ((1.0 + p) * (1.0 + p))),
        _ => Err(Error::InvalidParameter(format!("which must be 1, 2 or 3, got {which}"))),
    }
}

/// First-moment estimate of the number of Morse pentagons:
/// `C(n,5) · 12 · p⁵(1-p)⁵ · (1-5p²)^(n-5)`.
///
/// The last factor asks that no outside vertex has two non-adjacent
/// neighbors on the pentagon, which is stronger than the Morse condition,
/// so this undercounts the true expectation.
pub fn expected_morse_pentagons(n: usize, p: f64) -> Result<f64> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!("n must be at least 5, got {n}")));
    }
    check_probability(p)?;
    if 5.0 * p * p >= 1.0 {
        return Err(Error::OutOfDomain(format!("5p² >= 1 at p = {p}")));
    }
    let ln = ln_choose(n, 5)
        + 12f64.ln()
        + ln_pow(p, 5.0)
        + ln_pow_1m(p, 5.0)
        + ln_pow_1m(5.0 * p * p, (n - 5) as f64);
    Ok(ln.exp())
}

/// First-moment estimate of the number of Morse squares:
/// `C(n,4) · 3 · p⁴(1-p)² · (1-2p²)^(n-4)`.
///
/// The exclusion factor is `(1-2p²)`: an outside vertex must not be a
/// common neighbor of either diagonal. This agrees with the asymptotic
/// order `(np)⁴ e^(-2p²n)` of the total.
pub fn expected_morse_squares(n: usize, p: f64) -> Result<f64> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("n must be at least 4, got {n}")));
    }
    check_probability(p)?;
    if 2.0 * p * p >= 1.0 {
        return Err(Error::OutOfDomain(format!("2p² >= 1 at p = {p}")));
    }
    let ln = ln_choose(n, 4)
        + 3f64.ln()
        + ln_pow(p, 4.0)
        + ln_pow_1m(p, 2.0)
        + ln_pow_1m(2.0 * p * p, (n - 4) as f64);
    Ok(ln.exp())
}

/// Probability that the common neighborhood of a non-adjacent pair on a
/// `k`-cycle is a clique, given one common neighbor on the cycle and at
/// most four outside it:
/// `Σ_{l=0}^{4} C(n-k, l) · p^(2l) · (1-p²)^(n-k-l) · p^(C(l+1,2))`.
pub fn clique_link_probability(n: usize, k: usize, p: f64) -> Result<f64> {
    if k < 5 || k > n {
        return Err(Error::InvalidParameter(format!("need 5 <= k <= n, got k = {k}, n = {n}")));
    }
    check_open_probability(p)?;
    let outside = n - k;
    let total = (0..=outside.min(4))
        .map(|l| {
            let lf = l as f64;
            (ln_choose(outside, l)
                + ln_pow(p, 2.0 * lf)
                + ln_pow_1m(p * p, (outside - l) as f64)
                + ln_pow(p, lf * (lf + 1.0) / 2.0))
                .exp()
        })
        .sum();
    Ok(total)
}

/// Expected number of induced `k`-cycles,
/// `C(n,k) · (k!/(2k)) · p^k · (1-p)^(C(k,2)-k)`, which bounds the
/// probability that one exists. Values above 1 are returned as is.
pub fn long_cycle_bound(n: usize, p: f64, k: usize) -> Result<f64> {
    if k < 3 || k > n {
        return Err(Error::InvalidParameter(format!("need 3 <= k <= n, got k = {k}, n = {n}")));
    }
    check_probability(p)?;
    let kf = k as f64;
    let ln = ln_choose(n, k) + ln_factorial(k as u64) - (2.0 * kf).ln()
        + ln_pow(p, kf)
        + ln_pow_1m(p, kf * (kf - 1.0) / 2.0 - kf);
    Ok(ln.exp())
}

/// Density scales of the three transitions at a given `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdSet {
    /// `√(1/2) · √(ln n / n)`
    pub pentagon: f64,
    /// `√(ln n / n)`
    pub square: f64,
    /// `√(√6 - 2) · n^(-1/2)`
    pub cfs: f64,
}

/// `√(√6 - 2)`, the CFS threshold constant.
pub fn cfs_constant() -> f64 {
    (6f64.sqrt() - 2.0).sqrt()
}

pub fn thresholds(n: usize) -> Result<ThresholdSet> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n must be at least 3, got {n}")));
    }
    let nf = n as f64;
    let square = (nf.ln() / nf).sqrt();
    Ok(ThresholdSet {
        pentagon: std::f64::consts::FRAC_1_SQRT_2 * square,
        square,
        cfs: cfs_constant() / nf.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnp::{density_from_coefficient, Seed};
    use rand_core::RngCore;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    /// Conditional probability by summing over every configuration of `m`
    /// independent edge indicators.
    fn enumerate_conditional(p: f64, m: usize, event: impl Fn(&[bool]) -> bool, given: impl Fn(&[bool]) -> bool) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for mask in 0u32..1 << m {
            let e: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
            let present = mask.count_ones() as i32;
            let w = p.powi(present) * (1.0 - p).powi(m as i32 - present);
            if given(&e) {
                den += w;
                if event(&e) {
                    num += w;
                }
            }
        }
        num / den
    }

    fn lemma31_oracle(p: f64, which: u8) -> f64 {
        match which {
            1 => enumerate_conditional(p, 3, |e| e[0], |e| !(e[0] && e[1]) && !(e[0] && e[2])),
            2 => enumerate_conditional(p, 3, |e| e[0] && e[1], |e| !(e[1] && e[2])),
            _ => enumerate_conditional(p, 4, |e| e[0] && e[1], |e| !(e[0] && e[2]) && !(e[1] && e[3])),
        }
    }

    #[test]
    fn lemma31_examples() {
        for w in 1..=3 {
            assert_eq!(lemma31(0.0, w).unwrap(), 0.0);
        }
        assert!((lemma31(0.5, 1).unwrap() - 1.0 / 5.0).abs() < 1e-15);
        assert!((lemma31(0.5, 2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((lemma31(0.5, 3).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert!((lemma31(0.3, 1).unwrap() - 0.17355371900826447).abs() < 1e-15);
        assert!((lemma31(0.3, 2).unwrap() - 0.06923076923076923).abs() < 1e-15);
        assert!((lemma31(0.3, 3).unwrap() - 0.05325443786982249).abs() < 1e-15);
        assert!(lemma31(1.0, 1).is_err());
        assert!(lemma31(-0.1, 2).is_err());
        assert!(lemma31(0.5, 4).is_err());
    }

    #[test]
    fn lemma31_matches_enumeration() {
        for i in 0..100 {
            let p = i as f64 / 100.0;
            for w in 1..=3 {
                let v = lemma31(p, w).unwrap();
                assert!((0.0..=1.0).contains(&v));
                assert!((v - lemma31_oracle(p, w)).abs() < 1e-12, "p={p} which={w}");
            }
        }
    }

    #[test]
    fn lemma31_small_p_limits() {
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for p in [1e-2, 1e-3, 1e-4] {
            let d1 = (lemma31(p, 1).unwrap() - p).abs() / p;
            let d2 = (lemma31(p, 2).unwrap() / (p * p) - 1.0).abs();
            assert!(d1 < prev.0 && d2 < prev.1);
            assert!(d1 < 3.0 * p && d2 < 2.0 * p);
            prev = (d1, d2);
        }
    }

    #[test]
    fn pentagon_expectation() {
        let p: f64 = 0.3;
        let single = 12.0 * p.powi(5) * (1.0 - p).powi(5);
        assert!(close(expected_morse_pentagons(5, p).unwrap(), single, 1e-12));
        assert_eq!(expected_morse_pentagons(40, 0.0).unwrap(), 0.0);
        assert!(close(expected_morse_pentagons(7, 0.3).unwrap(), 0.031133101923, 1e-10));
        let d = density_from_coefficient(0.5, 256).unwrap();
        assert!(close(expected_morse_pentagons(256, d.p).unwrap(), 158.4876, 1e-5));
        let d = density_from_coefficient(0.5, 512).unwrap();
        assert!(close(expected_morse_pentagons(512, d.p).unwrap(), 555.38, 1e-4));
        let d = density_from_coefficient(0.95, 256).unwrap();
        assert!(close(expected_morse_pentagons(256, d.p).unwrap(), 1.6315e-5, 1e-3));
        assert!(matches!(expected_morse_pentagons(10, 0.45), Err(Error::OutOfDomain(_))));
        assert!(expected_morse_pentagons(4, 0.1).is_err());
    }

    #[test]
    fn square_expectation() {
        let p: f64 = 0.4;
        assert!(close(expected_morse_squares(4, p).unwrap(), 3.0 * p.powi(4) * (1.0 - p).powi(2), 1e-12));
        assert_eq!(expected_morse_squares(30, 0.0).unwrap(), 0.0);
        assert!(close(expected_morse_squares(512, 0.0993).unwrap(), 27.008, 1e-4));
        let d = density_from_coefficient(0.9, 512).unwrap();
        assert!(close(expected_morse_squares(512, d.p).unwrap(), 26.81, 1e-3));
        let d = density_from_coefficient(1.2, 512).unwrap();
        assert!(close(expected_morse_squares(512, d.p).unwrap(), 0.02588, 1e-3));
        assert!(matches!(expected_morse_squares(10, 0.75), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn first_moment_upper_bounds() {
        for n in [5usize, 9, 50, 300, 2000] {
            for i in 0..44 {
                let p = i as f64 / 100.0;
                let c5 = ln_choose(n, 5).exp() * 12.0 * p.powi(5);
                assert!(expected_morse_pentagons(n, p).unwrap() <= c5 * (1.0 + 1e-12));
                let c4 = ln_choose(n, 4).exp() * 3.0 * p.powi(4);
                assert!(expected_morse_squares(n, p).unwrap() <= c4 * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn clique_link_examples() {
        assert_eq!(clique_link_probability(10, 5, 0.0).unwrap(), 1.0);
        assert!((clique_link_probability(12, 12, 0.4).unwrap() - 1.0).abs() < 1e-15);
        assert!((clique_link_probability(10, 5, 0.3).unwrap() - 0.718_260_804_852_684_2).abs() < 1e-12);
        assert!(clique_link_probability(4, 5, 0.3).is_err());
        assert!(clique_link_probability(10, 4, 0.3).is_err());
    }

    #[test]
    fn clique_link_monte_carlo() {
        let (n, k, p) = (10, 5, 0.3);
        let cut = (p * 2f64.powi(64)) as u64;
        let mut rng = Seed(17).rng();
        let mut edge = || rng.next_u64() < cut;
        let samples = 200_000;
        let mut hits = 0;
        for _ in 0..samples {
            let l = (0..n - k).filter(|_| edge() && edge()).count();
            let pairs = l * (l + 1) / 2;
            if l <= 4 && (0..pairs).all(|_| edge()) {
                hits += 1;
            }
        }
        let exact = clique_link_probability(n, k, p).unwrap();
        let est = hits as f64 / samples as f64;
        let se = (exact * (1.0 - exact) / samples as f64).sqrt();
        assert!((est - exact).abs() < 4.0 * se, "{est} vs {exact}");
    }

    #[test]
    fn long_cycle_examples() {
        assert_eq!(long_cycle_bound(10, 0.0, 5).unwrap(), 0.0);
        assert!((long_cycle_bound(10, 0.5, 5).unwrap() - 2.953125).abs() < 1e-12);
        assert!((long_cycle_bound(3, 1.0, 3).unwrap() - 1.0).abs() < 1e-12);
        // C(8,4) · 3 · p⁴ (1-p)²
        let p: f64 = 0.2;
        assert!(close(long_cycle_bound(8, p, 4).unwrap(), 70.0 * 3.0 * p.powi(4) * (1.0 - p).powi(2), 1e-12));
        assert!(long_cycle_bound(5, 0.5, 6).is_err());
        assert!(long_cycle_bound(5, 0.5, 2).is_err());
    }

    #[test]
    fn threshold_values() {
        let t = thresholds(1024).unwrap();
        assert!((t.pentagon - 0.0581765220477974).abs() < 1e-13);
        assert!((t.square - 0.0822740264916925).abs() < 1e-13);
        assert!((t.cfs - 0.0209512488156839).abs() < 1e-13);
        assert!((cfs_constant() - 0.6704399621018858).abs() < 1e-15);
        assert!(thresholds(2).is_err());
        for n in [3usize, 4, 10, 100, 1 << 20] {
            let t = thresholds(n).unwrap();
            assert!(t.cfs < t.pentagon && t.pentagon < t.square);
            let ratio = t.pentagon / t.square;
            assert!((ratio - std::f64::consts::FRAC_1_SQRT_2).abs() <= 2.0 * f64::EPSILON);
        }
    }
}
