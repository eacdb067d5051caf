//! Explicit tail bounds: concentration inequalities for the small-jump
//! martingale, the small-time expansions of P(|X_t| > ε) with their validity
//! windows, the stable-type corollary and the centering gap of a compound
//! Poisson law.
//!
//! Every bound returns a [`BoundResult`] carrying the value, the validity
//! threshold, the constants that went into it and a per-term breakdown.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::{Error, Real, Result};

mod concentration;
mod constants;
mod corollary;
mod select;
mod theorems;

pub use concentration::{ccpp_centering_gap, chernoff_small_jumps, chernoff_with_gaussian, markov_baseline};
pub use constants::{constant, constants, scale_c, Constant, ConstantsTable};
pub use corollary::{bound_stable_type, StableType, Variant};
pub use select::{auto_select, auto_select_with, by_theorem};
pub use theorems::{
    bound_cdf_fv, bound_cdf_iv_general, bound_cdf_iv_lipschitz, bound_smalljump_fv, bound_smalljump_iv,
};

pub(crate) use constants::e_two;

/// Which result a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Chernoff bound on the small-jump martingale.
    LemmaSj,
    /// Chernoff bound with an added Brownian component.
    LemmaSjGauss,
    /// Small jumps, finite variation.
    Ps1,
    /// Distribution function, finite variation.
    Teo1,
    /// Small jumps, symmetric infinite variation.
    Ps2,
    /// Distribution function, symmetric infinite variation, no regularity.
    Lambda2bis,
    /// Distribution function, symmetric infinite variation, Lipschitz near ε.
    Lambda2,
    /// Stable-type densities bracketed from both sides.
    Corollary,
    /// Markov inequality baseline.
    Markov,
    /// Centering gap of a compound Poisson law.
    Ccpp,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::LemmaSj => "lemma_sj",
            Theorem::LemmaSjGauss => "lemma_sj_gauss",
            Theorem::Ps1 => "ps1",
            Theorem::Teo1 => "teo1",
            Theorem::Ps2 => "ps2",
            Theorem::Lambda2bis => "lambda2bis",
            Theorem::Lambda2 => "lambda2",
            Theorem::Corollary => "corollary",
            Theorem::Markov => "markov",
            Theorem::Ccpp => "ccpp",
        }
    }

    pub fn from_name(name: &str) -> Option<Theorem> {
        [
            Theorem::LemmaSj,
            Theorem::LemmaSjGauss,
            Theorem::Ps1,
            Theorem::Teo1,
            Theorem::Ps2,
            Theorem::Lambda2bis,
            Theorem::Lambda2,
            Theorem::Corollary,
            Theorem::Markov,
            Theorem::Ccpp,
        ]
        .into_iter()
        .find(|t| t.name() == name)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The quantity a bound controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// |P(|X_t| > ε) − λ_ε t|, not clamped.
    Residual,
    /// P(|t b(ε) + M_t(ε)| ≥ ε).
    DriftedSmallJumps,
    /// P(|M_t(ε)| ≥ ε) when two-sided, P(M_t(ε) ≥ ε) otherwise.
    SmallJumps { two_sided: bool },
    /// A generic probability (Chernoff and Markov at level x).
    Probability,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Residual => "residual",
            Target::DriftedSmallJumps => "drifted_small_jumps",
            Target::SmallJumps { two_sided: true } => "small_jumps_two_sided",
            Target::SmallJumps { two_sided: false } => "small_jumps_upper",
            Target::Probability => "probability",
        }
    }

    pub fn is_probability(self) -> bool {
        !matches!(self, Target::Residual)
    }
}

/// Multiplies one constant (or, with `constant: None`, the whole bound) by
/// `factor`. Used to check that the validator notices a corrupted bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation<T> {
    pub constant: Option<Constant>,
    pub factor: T,
}

/// Options shared by the bound evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions<T> {
    /// Double the one-sided α = 1 small-jump bound so it controls |M_t(ε)|.
    pub two_sided: bool,
    pub perturbation: Option<Perturbation<T>>,
}

impl<T> Default for BoundOptions<T> {
    fn default() -> Self {
        BoundOptions {
            two_sided: false,
            perturbation: None,
        }
    }
}

impl<T: Real> BoundOptions<T> {
    pub fn two_sided() -> Self {
        BoundOptions {
            two_sided: true,
            perturbation: None,
        }
    }

    pub fn perturbed(mut self, p: Perturbation<T>) -> Self {
        self.perturbation = Some(p);
        self
    }
}

/// A bound together with its validity window and provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult<T> {
    /// Reported value, clamped to [0, 1] when it bounds a probability.
    pub value: T,
    /// Value before clamping.
    pub raw_value: T,
    pub theorem: Theorem,
    pub branch: &'static str,
    pub target: Target,
    pub t: T,
    pub t_max: T,
    /// Whether the threshold is strict (t < t_max) or not (t ≤ t_max).
    pub strict: bool,
    pub valid: bool,
    /// Claimed order in t.
    pub rate_exponent: T,
    /// Constants, functionals and per-term addends (keys `term:<name>`).
    pub constants_used: BTreeMap<String, T>,
    pub notes: Vec<String>,
}

impl<T: Real> BoundResult<T> {
    pub fn constant(&self, name: &str) -> Option<T> {
        self.constants_used.get(name).copied()
    }

    /// The addends of the bound, in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&str, T)> {
        self.constants_used
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("term:").map(|name| (name, *v)))
    }
}

/// Accumulates the pieces of a bound and applies a perturbation if asked.
pub(crate) struct Assembly<T> {
    theorem: Theorem,
    branch: &'static str,
    target: Target,
    alpha: T,
    used: BTreeMap<String, T>,
    terms: Vec<T>,
    notes: Vec<String>,
    perturbation: Option<Perturbation<T>>,
}

impl<T: Real> Assembly<T> {
    pub(crate) fn new(theorem: Theorem, branch: &'static str, target: Target, alpha: T, opts: &BoundOptions<T>) -> Self {
        Assembly {
            theorem,
            branch,
            target,
            alpha,
            used: BTreeMap::new(),
            terms: Vec::new(),
            notes: Vec::new(),
            perturbation: opts.perturbation,
        }
    }

    /// Fetches a constant, records it, and applies a targeted perturbation.
    pub(crate) fn constant(&mut self, c: Constant, m: Option<T>, eps: Option<T>) -> Result<T> {
        let mut v = constants::constant(c, self.alpha, m, eps)?;
        if let Some(p) = self.perturbation {
            if p.constant == Some(c) {
                v = v * p.factor;
                self.notes.push(format!("{c} multiplied by {}", p.factor));
            }
        }
        self.used.insert(c.name().to_string(), v);
        Ok(v)
    }

    pub(crate) fn record(&mut self, key: &str, v: T) {
        self.used.insert(key.to_string(), v);
    }

    pub(crate) fn term(&mut self, name: &str, v: T) {
        self.used.insert(format!("term:{name}"), v);
        self.terms.push(v);
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub(crate) fn finish(mut self, t: T, t_max: T, strict: bool, rate_exponent: T) -> BoundResult<T> {
        let mut raw = self.terms.iter().fold(T::zero(), |acc, v| acc + *v);
        if let Some(p) = self.perturbation {
            if p.constant.is_none() {
                raw = raw * p.factor;
                self.notes.push(format!("whole bound multiplied by {}", p.factor));
            }
        }
        let value = if self.target.is_probability() {
            raw.max(T::zero()).min(T::one())
        } else {
            raw
        };
        self.used.insert("raw_value".to_string(), raw);
        let valid = if strict { t < t_max } else { t <= t_max };
        BoundResult {
            value,
            raw_value: raw,
            theorem: self.theorem,
            branch: self.branch,
            target: self.target,
            t,
            t_max,
            strict,
            valid,
            rate_exponent,
            constants_used: self.used,
            notes: self.notes,
        }
    }
}

pub(crate) fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

pub(crate) fn check_unit_eps<T: Real>(eps: T) -> Result<()> {
    if eps > T::zero() && eps <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidCutoff(format!("eps must lie in (0, 1], got {eps}")))
    }
}
