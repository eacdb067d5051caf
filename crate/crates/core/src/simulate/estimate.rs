//! Tail-probability estimation with confidence intervals.

use rayon::prelude::*;
use serde::Serialize;

use super::stats::{clopper_pearson, wilson};
use super::{Rng, SeededStream, SmallJumpScheme};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    Wilson,
    ClopperPearson,
}

/// Which exceedance is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// X > x
    Upper,
    /// |X| > x
    Both,
}

impl Tail {
    fn exceeds(self, x: f64, level: f64) -> bool {
        match self {
            Tail::Upper => x > level,
            Tail::Both => x.abs() > level,
        }
    }
}

/// Sample size, confidence and stream of an estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n: u64,
    pub confidence: f64,
    pub stream: SeededStream,
    pub shards: usize,
    pub method: CiMethod,
}

impl McConfig {
    /// Wilson 95% interval, one shard, stream 0 of `seed`.
    pub fn new(n: u64, seed: u64) -> Self {
        McConfig {
            n,
            confidence: 0.95,
            stream: SeededStream::new(seed, 0),
            shards: 1,
            method: CiMethod::Wilson,
        }
    }

    pub fn confidence(mut self, c: f64) -> Self {
        self.confidence = c;
        self
    }

    pub fn shards(mut self, shards: usize) -> Self {
        self.shards = shards;
        self
    }

    pub fn method(mut self, method: CiMethod) -> Self {
        self.method = method;
        self
    }

    pub fn stream(mut self, stream: SeededStream) -> Self {
        self.stream = stream;
        self
    }

    fn interval(&self, count: u64) -> Result<(f64, f64)> {
        match self.method {
            CiMethod::Wilson => wilson(count, self.n, self.confidence),
            CiMethod::ClopperPearson => clopper_pearson(count, self.n, self.confidence),
        }
    }
}

/// Systematic error of a scheme-based estimate. The truth lies in
/// `[ci(outer).lo − certified, ci(inner).hi + certified]`, where `outer`
/// counts exceedances of ε + margin and `inner` of ε − margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasBracket {
    pub margin: f64,
    /// Bound on P(|discarded remainder| > margin).
    pub certified: f64,
    pub inner_count: u64,
    pub outer_count: u64,
}

/// Monte Carlo estimate of an exceedance probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub p_hat: f64,
    pub n: u64,
    pub count: u64,
    /// Reported interval; widened by the bias bracket when there is one.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Sampling interval around `p_hat` alone.
    pub sampling_ci: (f64, f64),
    pub confidence: f64,
    pub method: CiMethod,
    pub bias: Option<BiasBracket>,
}

impl MCEstimate {
    /// Half-width of the sampling interval.
    pub fn sampling_half_width(&self) -> f64 {
        (self.sampling_ci.1 - self.sampling_ci.0) / 2.0
    }
}

/// Counts, for each level, the draws exceeding it.
fn count_exceedances<F>(sampler: &F, levels: &[f64], tail: Tail, cfg: &McConfig) -> Vec<u64>
where
    F: Fn(&mut Rng) -> f64 + Sync,
{
    let shards = cfg.shards.max(1) as u64;
    let chunk = cfg.n.div_ceil(shards);
    (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut counts = vec![0u64; levels.len()];
            let end = ((s + 1) * chunk).min(cfg.n);
            for i in (s * chunk).min(end)..end {
                let x = sampler(&mut cfg.stream.rng(i));
                for (c, &level) in counts.iter_mut().zip(levels) {
                    *c += u64::from(tail.exceeds(x, level));
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; levels.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        )
}

fn check_config(level: f64, cfg: &McConfig) -> Result<()> {
    if cfg.n == 0 {
        return Err(Error::InvalidParameter("n >= 1 required".into()));
    }
    if !(cfg.confidence > 0.0 && cfg.confidence < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence must lie in (0, 1), got {}",
            cfg.confidence
        )));
    }
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::InvalidCutoff(format!("eps > 0 required, got {level}")));
    }
    Ok(())
}

/// Estimates P(|X| > ε) from `n` draws of `sampler` with a Wilson interval.
pub fn estimate_tail_prob<F>(
    sampler: F,
    eps: f64,
    n: u64,
    confidence: f64,
    stream: SeededStream,
    shards: usize,
) -> Result<MCEstimate>
where
    F: Fn(&mut Rng) -> f64 + Sync,
{
    let cfg = McConfig {
        n,
        confidence,
        stream,
        shards,
        method: CiMethod::Wilson,
    };
    estimate(sampler, eps, Tail::Both, None, &cfg)
}

/// Estimates P(X > level) or P(|X| > level). With a `scheme`, the draws are
/// also classified at level ± margin and the interval is widened to the
/// certified bracket.
pub fn estimate<F>(
    sampler: F,
    level: f64,
    tail: Tail,
    scheme: Option<&SmallJumpScheme>,
    cfg: &McConfig,
) -> Result<MCEstimate>
where
    F: Fn(&mut Rng) -> f64 + Sync,
{
    check_config(level, cfg)?;
    let levels = match scheme {
        Some(s) => vec![level, level - s.margin, level + s.margin],
        None => vec![level],
    };
    let counts = count_exceedances(&sampler, &levels, tail, cfg);
    let count = counts[0];
    let sampling_ci = cfg.interval(count)?;
    let p_hat = count as f64 / cfg.n as f64;
    let (ci_low, ci_high, bias) = match scheme {
        Some(s) => {
            let hi = (cfg.interval(counts[1])?.1 + s.certified_bias).min(1.0);
            let lo = (cfg.interval(counts[2])?.0 - s.certified_bias).max(0.0);
            let bracket = BiasBracket {
                margin: s.margin,
                certified: s.certified_bias,
                inner_count: counts[1],
                outer_count: counts[2],
            };
            (lo.min(sampling_ci.0), hi.max(sampling_ci.1), Some(bracket))
        }
        None => (sampling_ci.0, sampling_ci.1, None),
    };
    Ok(MCEstimate {
        p_hat,
        n: cfg.n,
        count,
        ci_low,
        ci_high,
        sampling_ci,
        confidence: cfg.confidence,
        method: cfg.method,
        bias,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn constant_samplers() {
        let s = SeededStream::new(1, 0);
        let zero = estimate_tail_prob(|_| 0.0, 0.5, 1000, 0.95, s, 4).unwrap();
        assert_eq!((zero.p_hat, zero.ci_low), (0.0, 0.0));
        let far = estimate_tail_prob(|_| 1.0, 0.5, 1000, 0.95, s, 4).unwrap();
        assert_eq!((far.p_hat, far.ci_high), (1.0, 1.0));
    }

    #[test]
    fn fair_coin_and_shard_invariance() {
        let coin = |rng: &mut Rng| if rng.random::<bool>() { 1.0 } else { -1.0 };
        let s = SeededStream::new(2024, 3);
        let one = estimate_tail_prob(coin, 0.5, 10_000, 0.95, s, 1).unwrap();
        assert_eq!(one.p_hat, 1.0);
        let upper = |shards| estimate(coin, 0.5, Tail::Upper, None, &McConfig::new(10_000, 11).shards(shards)).unwrap();
        let base = upper(1);
        assert!(base.ci_low <= 0.5 && 0.5 <= base.ci_high, "{base:?}");
        assert_eq!(base, upper(4));
        assert_eq!(base, upper(16));
    }
}
