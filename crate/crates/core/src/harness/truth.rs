//! Sources of the true tail probability: closed forms or Monte Carlo.

use serde::Serialize;

use crate::bounds::Target;
use crate::closed_forms::{cauchy_tail, cpp_exact_tail, gamma_tail, ig_tail, poisson_cutoff};
use crate::levy_model::ModelKind;
use crate::simulate::{
    estimate, CiMethod, IncrementSampler, MCEstimate, McConfig, Rng, SeededStream, SmallJumpSampler,
    SmallJumpScheme, Tail,
};
use crate::{Error, Exact, Model, Result};

/// How a Monte Carlo truth handles the small jumps of models without an
/// exact sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeChoice {
    /// Calibrated truncation whose bias is certified within `bias_budget`
    /// using a margin of at most `max_margin_frac·ε` and at most `max_jumps`
    /// simulated jumps per draw on average.
    Certified {
        bias_budget: f64,
        max_margin_frac: f64,
        max_jumps: f64,
    },
    /// Inner cutoff `inner_cutoff_frac·ε` with the Gaussian refinement; the
    /// reported bias bracket is wide, the point estimate accurate.
    Refined { inner_cutoff_frac: f64 },
}

/// Monte Carlo settings for a truth source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McTruth {
    pub n: u64,
    pub confidence: f64,
    pub method: CiMethod,
    pub seed: u64,
    pub shards: usize,
    pub scheme: SchemeChoice,
}

impl McTruth {
    /// 99% Clopper–Pearson with a certified scheme (budget 10⁻⁴, margin up
    /// to ε/2, at most 100 jumps per draw).
    pub fn new(n: u64, seed: u64) -> Self {
        McTruth {
            n,
            confidence: 0.99,
            method: CiMethod::ClopperPearson,
            seed,
            shards: 1,
            scheme: SchemeChoice::Certified {
                bias_budget: 1e-4,
                max_margin_frac: 0.5,
                max_jumps: 100.0,
            },
        }
    }

    pub fn scheme(mut self, scheme: SchemeChoice) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn shards(mut self, shards: usize) -> Self {
        self.shards = shards;
        self
    }

    pub fn method(mut self, method: CiMethod, confidence: f64) -> Self {
        self.method = method;
        self.confidence = confidence;
        self
    }

    fn config(&self, stream_id: u64) -> McConfig {
        McConfig {
            n: self.n,
            confidence: self.confidence,
            stream: SeededStream::new(self.seed, stream_id),
            shards: self.shards,
            method: self.method,
        }
    }

    fn build_scheme(&self, model: &Model, eps: f64, t: f64) -> Result<SmallJumpScheme> {
        match self.scheme {
            SchemeChoice::Certified {
                bias_budget,
                max_margin_frac,
                max_jumps,
            } => SmallJumpScheme::calibrate(model, eps, t, bias_budget, max_margin_frac * eps, false, max_jumps),
            SchemeChoice::Refined { inner_cutoff_frac } => {
                SmallJumpScheme::new(model, eps, t, inner_cutoff_frac * eps, true, None)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Truth {
    ClosedForm,
    MonteCarlo(McTruth),
}

/// The truth at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruthPoint {
    pub value: f64,
    /// Monte Carlo interval (widened by any certified bias).
    pub ci: Option<(f64, f64)>,
    /// Numerical error of a closed form.
    pub abs_error: f64,
    pub estimate: Option<MCEstimate>,
}

impl TruthPoint {
    fn exact(e: Exact) -> Self {
        TruthPoint {
            value: e.prob,
            ci: None,
            abs_error: e.abs_error,
            estimate: None,
        }
    }

    fn sampled(e: MCEstimate) -> Self {
        TruthPoint {
            value: e.p_hat,
            ci: Some((e.ci_low, e.ci_high)),
            abs_error: 0.0,
            estimate: Some(e),
        }
    }

    /// Lower end of the truth's uncertainty.
    pub fn low(&self) -> f64 {
        self.ci.map_or((self.value - self.abs_error).max(0.0), |c| c.0)
    }
}

/// Exact P(|X_t| > ε) for the builtins that have one.
pub fn closed_form_tail(model: &Model, eps: f64, t: f64) -> Result<Exact> {
    match model.kind() {
        ModelKind::Cauchy => cauchy_tail(eps, t),
        ModelKind::Gamma => gamma_tail(eps, t),
        ModelKind::InverseGaussian => ig_tail(eps, t),
        ModelKind::CompoundPoisson { lambda, law } => {
            let n_max = poisson_cutoff(lambda * t, 1e-17);
            cpp_exact_tail(*lambda, law, eps, t, n_max)
        }
        _ => Err(Error::TruthUnavailable(format!("{} has no closed-form tail", model.name()))),
    }
}

fn has_exact_increments(model: &Model) -> bool {
    matches!(
        model.kind(),
        ModelKind::Cauchy
            | ModelKind::Gamma
            | ModelKind::InverseGaussian
            | ModelKind::Stable { .. }
            | ModelKind::CompoundPoisson { .. }
    )
}

/// P(|X_t| > ε) from `truth`.
pub(crate) fn increment_truth(model: &Model, eps: f64, t: f64, truth: &Truth, stream_id: u64) -> Result<TruthPoint> {
    match truth {
        Truth::ClosedForm => Ok(TruthPoint::exact(closed_form_tail(model, eps, t)?)),
        Truth::MonteCarlo(mc) => {
            let cfg = mc.config(stream_id);
            let e = if has_exact_increments(model) {
                let s = IncrementSampler::new(model, t, None)?;
                estimate(|r: &mut Rng| s.sample(r), eps, Tail::Both, None, &cfg)?
            } else {
                let scheme = mc.build_scheme(model, eps, t)?;
                let s = IncrementSampler::new(model, t, Some(&scheme))?;
                estimate(|r: &mut Rng| s.sample(r), eps, Tail::Both, Some(&scheme), &cfg)?
            };
            Ok(TruthPoint::sampled(e))
        }
    }
}

/// Probability controlled by a small-jump bound: P(|t b(ε) + M_t(ε)| ≥ ε),
/// P(|M_t(ε)| ≥ ε) or P(M_t(ε) ≥ ε), always by Monte Carlo.
pub(crate) fn small_jump_truth(
    model: &Model,
    eps: f64,
    t: f64,
    target: Target,
    mc: &McTruth,
    stream_id: u64,
) -> Result<TruthPoint> {
    let (drift, tail) = match target {
        Target::DriftedSmallJumps => (t * model.drift(eps)?.value, Tail::Both),
        Target::SmallJumps { two_sided: true } => (0.0, Tail::Both),
        Target::SmallJumps { two_sided: false } => (0.0, Tail::Upper),
        other => {
            return Err(Error::TruthUnavailable(format!("{other:?} is not a small-jump target")));
        }
    };
    let scheme = mc.build_scheme(model, eps, t)?;
    let s = SmallJumpSampler::new(model, eps, &scheme, t)?;
    let e = estimate(|r: &mut Rng| drift + s.sample(r), eps, tail, Some(&scheme), &mc.config(stream_id))?;
    Ok(TruthPoint::sampled(e))
}
