//! Truncation of the small jumps below an inner cutoff δ with a certified
//! bound on what is thrown away.

use serde::Serialize;

use crate::bounds::chernoff_small_jumps;
use crate::special::erfc;
use crate::{Error, Model, Result};

/// How M_t(ε) is simulated: jumps in (δ, ε] exactly, the remainder M_t(δ)
/// either dropped or replaced by a Gaussian of the same variance.
///
/// `certified_bias` bounds the probability that the simulated value and the
/// true one differ by more than `margin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallJumpScheme {
    pub inner_cutoff: f64,
    pub gaussian_refinement: bool,
    pub bias_budget: f64,
    pub margin: f64,
    pub certified_bias: f64,
    /// σ²(δ), the variance rate of the discarded part.
    pub inner_sigma2: f64,
    pub t: f64,
}

/// min(Markov, Chernoff) bound on P(|M_t(δ)| > m).
fn remainder_bound(sigma2: f64, delta: f64, t: f64, m: f64) -> Result<f64> {
    if sigma2 == 0.0 {
        return Ok(0.0);
    }
    let markov = (t * sigma2 / (m * m)).min(1.0);
    if delta > 1.0 {
        return Ok(markov);
    }
    let chernoff = chernoff_small_jumps(sigma2, delta, t, m, true)?.value;
    Ok(markov.min(chernoff))
}

/// Bound on P(|X − X̃| > m) where X̃ is the simulated value.
fn certify(sigma2: f64, delta: f64, t: f64, m: f64, gaussian: bool) -> Result<f64> {
    if !gaussian {
        return remainder_bound(sigma2, delta, t, m);
    }
    // |M_t(δ) − G| > m forces one of them beyond m/2
    let half = m / 2.0;
    let sd = (t * sigma2).sqrt();
    let gauss = if sd == 0.0 { 0.0 } else { erfc(half / (sd * std::f64::consts::SQRT_2)) };
    Ok((remainder_bound(sigma2, delta, t, half)? + gauss).min(1.0))
}

fn inner_sigma2(model: &Model, delta: f64) -> Result<f64> {
    let s = model.sigma2(delta)?;
    Ok(s.value + s.abs_error_estimate)
}

impl SmallJumpScheme {
    /// Scheme with a given inner cutoff; `margin` defaults to δ and the
    /// budget is set to the resulting certified bias.
    pub fn new(
        model: &Model,
        eps: f64,
        t: f64,
        inner_cutoff: f64,
        gaussian_refinement: bool,
        margin: Option<f64>,
    ) -> Result<Self> {
        if !(inner_cutoff > 0.0 && inner_cutoff < eps) {
            return Err(Error::InvalidCutoff(format!(
                "inner cutoff must lie in (0, eps), got {inner_cutoff} with eps = {eps}"
            )));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t > 0 required, got {t}")));
        }
        let margin = margin.unwrap_or(inner_cutoff);
        if !(margin > 0.0 && margin < eps) {
            return Err(Error::InvalidParameter(format!("margin must lie in (0, eps), got {margin}")));
        }
        let sigma2 = inner_sigma2(model, inner_cutoff)?;
        let certified_bias = certify(sigma2, inner_cutoff, t, margin, gaussian_refinement)?;
        Ok(SmallJumpScheme {
            inner_cutoff,
            gaussian_refinement,
            bias_budget: certified_bias,
            margin,
            certified_bias,
            inner_sigma2: sigma2,
            t,
        })
    }

    /// Smallest δ = ε2^{−k} whose expected number of simulated jumps
    /// λ_δ t stays within `max_jumps` and for which some margin up to
    /// `max_margin` keeps the certified bias within `bias_budget`, together
    /// with the smallest such margin.
    pub fn calibrate(
        model: &Model,
        eps: f64,
        t: f64,
        bias_budget: f64,
        max_margin: f64,
        gaussian_refinement: bool,
        max_jumps: f64,
    ) -> Result<Self> {
        if !(bias_budget > 0.0) {
            return Err(Error::InvalidParameter(format!("bias budget must be positive, got {bias_budget}")));
        }
        if !(max_margin > 0.0 && max_margin < eps) {
            return Err(Error::InvalidParameter(format!(
                "max margin must lie in (0, eps), got {max_margin}"
            )));
        }
        let mut chosen = None;
        for k in 1..=60 {
            let delta = eps * 0.5f64.powi(k);
            if k > 1 && model.lambda(delta)?.value * t > max_jumps {
                break;
            }
            let sigma2 = inner_sigma2(model, delta)?;
            if certify(sigma2, delta, t, max_margin, gaussian_refinement)? <= bias_budget {
                chosen = Some((delta, sigma2));
            }
        }
        let (delta, sigma2) = chosen.ok_or_else(|| {
            Error::SchemeInfeasible(format!(
                "no inner cutoff eps*2^-k with at most {max_jumps} expected jumps keeps the certified \
                 bias below {bias_budget} with margin <= {max_margin}"
            ))
        })?;
        let cert = |m: f64| certify(sigma2, delta, t, m, gaussian_refinement);
        // the bound decreases in m; bisect on log m
        let (mut lo, mut hi) = ((max_margin * 1e-12).ln(), max_margin.ln());
        if cert(lo.exp())? <= bias_budget {
            hi = lo;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if cert(mid.exp())? <= bias_budget {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let margin = hi.exp().min(max_margin);
        Ok(SmallJumpScheme {
            inner_cutoff: delta,
            gaussian_refinement,
            bias_budget,
            margin,
            certified_bias: cert(margin)?,
            inner_sigma2: sigma2,
            t,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy_model::power_law;

    #[test]
    fn calibrated_scheme_meets_budget() {
        let model = power_law(1.0, 0.5, 2.0).unwrap();
        let s = SmallJumpScheme::calibrate(&model, 0.5, 0.1, 1e-6, 0.05, false, 100.0).unwrap();
        assert!(s.inner_cutoff < 0.5);
        assert!(model.lambda(s.inner_cutoff).unwrap().value * 0.1 <= 100.0);
        assert!(s.certified_bias <= 1e-6 && s.margin <= 0.05, "{s:?}");
        let fixed = SmallJumpScheme::new(&model, 0.5, 0.1, s.inner_cutoff, false, Some(s.margin)).unwrap();
        assert_eq!(fixed.certified_bias, s.certified_bias);
    }

    #[test]
    fn infeasible_budget() {
        let model = power_law(1.0, 1.5, 2.0).unwrap();
        let r = SmallJumpScheme::calibrate(&model, 0.5, 0.1, 1e-300, 1e-6, false, 100.0);
        assert!(matches!(r, Err(Error::SchemeInfeasible(_))));
    }
}
