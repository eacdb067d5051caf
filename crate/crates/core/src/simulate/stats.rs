//! Binomial confidence intervals and the two-sample Kolmogorov–Smirnov test.

use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF, Normal};

use crate::{Error, Result};

fn check_confidence(confidence: f64) -> Result<()> {
    if confidence > 0.0 && confidence < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("confidence must lie in (0, 1), got {confidence}")))
    }
}

fn check_counts(successes: u64, n: u64) -> Result<()> {
    if n == 0 || successes > n {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and successes <= n, got {successes} of {n}"
        )));
    }
    Ok(())
}

/// Wilson score interval for `successes` out of `n`.
pub fn wilson(successes: u64, n: u64, confidence: f64) -> Result<(f64, f64)> {
    check_confidence(confidence)?;
    check_counts(successes, n)?;
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2n = z * z / nf;
    let centre = (p + z2n / 2.0) / (1.0 + z2n);
    let half = z / (1.0 + z2n) * (p * (1.0 - p) / nf + z2n / (4.0 * nf)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0).min(p) };
    let hi = if successes == n { 1.0 } else { (centre + half).min(1.0).max(p) };
    Ok((lo, hi))
}

/// Exact Clopper–Pearson interval for `successes` out of `n`.
pub fn clopper_pearson(successes: u64, n: u64, confidence: f64) -> Result<(f64, f64)> {
    check_confidence(confidence)?;
    check_counts(successes, n)?;
    let tail = (1.0 - confidence) / 2.0;
    let (k, nf) = (successes as f64, n as f64);
    let beta = |a: f64, b: f64| Beta::new(a, b).map_err(|e| Error::InvalidParameter(e.to_string()));
    let lo = if successes == 0 {
        0.0
    } else {
        beta(k, nf - k + 1.0)?.inverse_cdf(tail)
    };
    let hi = if successes == n {
        1.0
    } else {
        beta(k + 1.0, nf - k)?.inverse_cdf(1.0 - tail)
    };
    let p = k / nf;
    Ok((lo.min(p), hi.max(p)))
}

/// Result of a two-sample Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsTest {
    pub statistic: f64,
    /// Asymptotic p-value.
    pub p_value: f64,
}

/// Kolmogorov survival function Q(λ) = 2 Σ (−1)^{j−1} e^{−2j²λ²}.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = sign * (-2.0 * jf * jf * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS test with the small-sample corrected asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsTest> {
    if a.is_empty() || b.is_empty() || a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::InvalidParameter("KS test needs two non-empty samples without NaN".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let en = (na * nb / (na + nb)).sqrt();
    Ok(KsTest {
        statistic: d,
        p_value: kolmogorov_q((en + 0.12 + 0.11 / en) * d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson(0, 100, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson(100, 100, 0.95).unwrap();
        assert_eq!(hi, 1.0);
        assert!(lo > 0.95);
        // n = 10⁴, p = 1/2: half-width ≈ 1.96·0.005
        let (lo, hi) = wilson(5000, 10_000, 0.95).unwrap();
        assert_relative_eq!((hi - lo) / 2.0, 1.959_964 * 0.005, max_relative = 1e-3);
    }

    #[test]
    fn clopper_pearson_known_value() {
        // 0 of n: upper limit 1 − (α/2)^{1/n}
        let (lo, hi) = clopper_pearson(0, 50, 0.99).unwrap();
        assert_eq!(lo, 0.0);
        assert_relative_eq!(hi, 1.0 - 0.005f64.powf(1.0 / 50.0), max_relative = 1e-9);
        let (lo, hi) = clopper_pearson(50, 50, 0.99).unwrap();
        assert_relative_eq!(lo, 0.005f64.powf(1.0 / 50.0), max_relative = 1e-9);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn ks_identical_and_shifted() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let same = ks_two_sample(&a, &a).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert_eq!(same.p_value, 1.0);
        let b: Vec<f64> = a.iter().map(|x| x + 0.2).collect();
        let shifted = ks_two_sample(&a, &b).unwrap();
        assert!((shifted.statistic - 0.2).abs() <= 0.002);
        assert!(shifted.p_value < 1e-10);
    }
}
