//! Lévy jump densities with class certificates and their functionals.
//!
//! A [`LevyModel`] couples a density `f` with the constants certifying
//! membership in 𝓛_{M,α} (`f(x) ≤ M|x|^{−1−α}` for `|x| ≤ 2`) and, when
//! needed, in 𝓛_M (`f ≤ M` for `|x| ≥ 1`). Functionals are computed by
//! [closed forms](ClosedForms) when the model carries them and by
//! log-coordinate quadrature otherwise.

mod builtin;
mod class;
mod config;
mod functionals;
mod jump_law;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::quadrature::Tolerance;
use crate::{Error, Real, Result};

pub use builtin::{
    cauchy, cpp, discontinuous, gamma_process, inverse_gaussian, power_law, stable, tempered_stable,
};
pub use class::{class_functional_bounds, verify_class_membership, ClassBounds, ClassCheck, ClassReport};
pub use config::{parse_inline, ModelSpec};
pub use functionals::{FunctionalValue, Source};
pub use jump_law::JumpLaw;

/// Scalar function shared between threads (densities, closed forms).
pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variation {
    Finite,
    Infinite,
}

/// Integrable majorant of one half of the density far from the origin,
/// valid for `|x| ≥ from`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailEnvelope<T> {
    /// `coef · e^{−rate·|x|}`
    Exponential { coef: T, rate: T, from: T },
    /// `coef · |x|^{−exponent}`, integrable for `exponent > 1`
    Power { coef: T, exponent: T, from: T },
}

impl<T: Real> TailEnvelope<T> {
    pub fn from(&self) -> T {
        match *self {
            TailEnvelope::Exponential { from, .. } | TailEnvelope::Power { from, .. } => from,
        }
    }

    pub fn value(&self, x: T) -> T {
        match *self {
            TailEnvelope::Exponential { coef, rate, .. } => coef * (-rate * x).exp(),
            TailEnvelope::Power { coef, exponent, .. } => coef * x.powf(-exponent),
        }
    }

    /// `∫_x^∞` of the envelope, infinite when it is not integrable.
    pub fn remainder(&self, x: T) -> T {
        match *self {
            TailEnvelope::Exponential { coef, rate, .. } => coef / rate * (-rate * x).exp(),
            TailEnvelope::Power { coef, exponent, .. } => {
                if exponent <= T::one() {
                    T::infinity()
                } else {
                    coef * x.powf(T::one() - exponent) / (exponent - T::one())
                }
            }
        }
    }

    /// Smallest `x ≥ from` with `remainder(x) ≤ target`.
    pub fn cutoff(&self, target: T) -> Option<T> {
        let x = match *self {
            TailEnvelope::Exponential { coef, rate, .. } => {
                if rate <= T::zero() {
                    return None;
                }
                (coef / (rate * target)).ln() / rate
            }
            TailEnvelope::Power { coef, exponent, .. } => {
                if exponent <= T::one() {
                    return None;
                }
                let p = exponent - T::one();
                (coef / (p * target)).powf(p.recip())
            }
        };
        Some(x.max(self.from()))
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            TailEnvelope::Exponential { coef, rate, from } => {
                coef > T::zero() && rate > T::zero() && from > T::zero()
            }
            TailEnvelope::Power { coef, exponent, from } => {
                coef > T::zero() && exponent > T::one() && from > T::zero()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "tail envelope needs positive coefficients, from > 0 and an integrable decay"
                    .into(),
            ))
        }
    }
}

/// How the Lipschitz constant near the cutoff is certified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LipschitzRule<T> {
    /// One constant on a fixed interval `(lo, hi)`.
    Fixed { constant: T, lo: T, hi: T },
    /// `coef · (ε∧1)^{−power}` on `(3/4(ε∧1), 2ε − 3/4(ε∧1))` for every ε.
    Scaled { coef: T, power: T },
}

/// Lipschitz certificate with an optional enlarged class constant under
/// which the Lipschitz-based bound is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzCert<T> {
    pub rule: LipschitzRule<T>,
    pub class_m: Option<T>,
}

impl<T: Real> LipschitzCert<T> {
    pub fn fixed(constant: T, lo: T, hi: T) -> Self {
        LipschitzCert {
            rule: LipschitzRule::Fixed { constant, lo, hi },
            class_m: None,
        }
    }

    pub fn scaled(coef: T, power: T) -> Self {
        LipschitzCert {
            rule: LipschitzRule::Scaled { coef, power },
            class_m: None,
        }
    }

    pub fn with_class_m(mut self, m: T) -> Self {
        self.class_m = Some(m);
        self
    }

    /// Interval on which the Lipschitz bound is needed at cutoff `eps`.
    pub fn required_interval(eps: T) -> (T, T) {
        let e1 = eps.min(T::one());
        let q = T::lit(0.75) * e1;
        (q, T::lit(2.0) * eps - q)
    }

    /// Certified constant at cutoff `eps`, or `None` when the certificate
    /// does not cover the required interval.
    pub fn constant_at(&self, eps: T) -> Option<T> {
        match self.rule {
            LipschitzRule::Fixed { constant, lo, hi } => {
                let (need_lo, need_hi) = Self::required_interval(eps);
                (lo <= need_lo && hi >= need_hi).then_some(constant)
            }
            LipschitzRule::Scaled { coef, power } => Some(coef * eps.min(T::one()).powf(-power)),
        }
    }
}

/// Optional exact functionals that bypass quadrature.
#[derive(Clone)]
pub struct ClosedForms<T> {
    pub lambda: Option<ScalarFn<T>>,
    pub sigma2: Option<ScalarFn<T>>,
    pub drift: Option<ScalarFn<T>>,
}

impl<T> Default for ClosedForms<T> {
    fn default() -> Self {
        ClosedForms {
            lambda: None,
            sigma2: None,
            drift: None,
        }
    }
}

impl<T> fmt::Debug for ClosedForms<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedForms")
            .field("lambda", &self.lambda.is_some())
            .field("sigma2", &self.sigma2.is_some())
            .field("drift", &self.drift.is_some())
            .finish()
    }
}

/// Identity of a builtin process, used for exact samplers and exact tails.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind<T> {
    Cauchy,
    Gamma,
    InverseGaussian,
    Stable { alpha: T, scale: T },
    TemperedStable { alpha: T, theta: T },
    PowerLaw { m: T, alpha: T, cut: T },
    CompoundPoisson { lambda: T, law: JumpLaw<T> },
    Custom,
}

/// A Lévy jump density with its certificates. Immutable once built.
#[derive(Clone)]
pub struct LevyModel<T> {
    name: String,
    density: ScalarFn<T>,
    symmetric: bool,
    variation: Option<Variation>,
    class_alpha: T,
    class_m: T,
    global_m: Option<T>,
    lipschitz: Option<LipschitzCert<T>>,
    closed: ClosedForms<T>,
    extent_neg: T,
    extent_pos: T,
    breakpoints: Vec<T>,
    envelope: Option<TailEnvelope<T>>,
    kind: ModelKind<T>,
    tol: Tolerance<T>,
}

impl<T: Real> fmt::Debug for LevyModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LevyModel")
            .field("name", &self.name)
            .field("symmetric", &self.symmetric)
            .field("variation", &self.variation)
            .field("class_alpha", &self.class_alpha)
            .field("class_m", &self.class_m)
            .field("global_m", &self.global_m)
            .field("lipschitz", &self.lipschitz)
            .field("closed", &self.closed)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl<T: Real> LevyModel<T> {
    pub fn builder<F>(name: impl Into<String>, density: F) -> ModelBuilder<T>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        ModelBuilder::new(name.into(), Arc::new(density))
    }

    /// Copy of the model with some certificates replaced; the result is
    /// validated like a freshly built model.
    pub fn to_builder(&self) -> ModelBuilder<T> {
        ModelBuilder {
            model: self.clone(),
            class_set: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn density(&self, x: T) -> T {
        (self.density)(x)
    }
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }
    pub fn variation(&self) -> Option<Variation> {
        self.variation
    }
    pub fn class_alpha(&self) -> T {
        self.class_alpha
    }
    pub fn class_m(&self) -> T {
        self.class_m
    }
    pub fn global_m(&self) -> Option<T> {
        self.global_m
    }
    pub fn lipschitz(&self) -> Option<&LipschitzCert<T>> {
        self.lipschitz.as_ref()
    }
    pub fn closed_forms(&self) -> &ClosedForms<T> {
        &self.closed
    }
    pub fn kind(&self) -> &ModelKind<T> {
        &self.kind
    }
    pub fn tolerance(&self) -> &Tolerance<T> {
        &self.tol
    }
    /// Support extents `(negative side, positive side)` as distances from 0.
    pub fn extents(&self) -> (T, T) {
        (self.extent_neg, self.extent_pos)
    }
    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    /// Declared envelope, or the default `global_M·e^{1−|x|}` beyond 1.
    pub fn envelope(&self) -> Option<TailEnvelope<T>> {
        self.envelope.or_else(|| {
            self.global_m.map(|m| TailEnvelope::Exponential {
                coef: m * T::one().exp(),
                rate: T::one(),
                from: T::one(),
            })
        })
    }
}

/// Builder validating certificates before a model is handed out.
pub struct ModelBuilder<T> {
    model: LevyModel<T>,
    class_set: bool,
}

impl<T: Real> ModelBuilder<T> {
    fn new(name: String, density: ScalarFn<T>) -> Self {
        ModelBuilder {
            model: LevyModel {
                name,
                density,
                symmetric: false,
                variation: None,
                class_alpha: T::one(),
                class_m: T::one(),
                global_m: None,
                lipschitz: None,
                closed: ClosedForms::default(),
                extent_neg: T::infinity(),
                extent_pos: T::infinity(),
                breakpoints: Vec::new(),
                envelope: None,
                kind: ModelKind::Custom,
                tol: Tolerance::default(),
            },
            class_set: false,
        }
    }

    /// Certificate for 𝓛_{M,α}.
    pub fn class(mut self, m: T, alpha: T) -> Self {
        self.model.class_m = m;
        self.model.class_alpha = alpha;
        self.class_set = true;
        self
    }
    pub fn class_m(mut self, m: T) -> Self {
        self.model.class_m = m;
        self
    }
    pub fn class_alpha(mut self, alpha: T) -> Self {
        self.model.class_alpha = alpha;
        self
    }
    pub fn variation(mut self, v: Variation) -> Self {
        self.model.variation = Some(v);
        self
    }
    pub fn symmetric(mut self, yes: bool) -> Self {
        self.model.symmetric = yes;
        self
    }
    /// Certificate for 𝓛_M.
    pub fn global_m(mut self, m: Option<T>) -> Self {
        self.model.global_m = m;
        self
    }
    pub fn support(mut self, neg: T, pos: T) -> Self {
        self.model.extent_neg = neg;
        self.model.extent_pos = pos;
        self
    }
    pub fn breakpoints(mut self, points: Vec<T>) -> Self {
        self.model.breakpoints = points;
        self
    }
    pub fn envelope(mut self, env: TailEnvelope<T>) -> Self {
        self.model.envelope = Some(env);
        self
    }
    pub fn lipschitz(mut self, cert: Option<LipschitzCert<T>>) -> Self {
        self.model.lipschitz = cert;
        self
    }
    pub fn closed_lambda(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.model.closed.lambda = Some(Arc::new(f));
        self
    }
    pub fn closed_sigma2(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.model.closed.sigma2 = Some(Arc::new(f));
        self
    }
    pub fn closed_drift(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.model.closed.drift = Some(Arc::new(f));
        self
    }
    /// Drops every closed form so that all functionals go through quadrature.
    pub fn without_closed_forms(mut self) -> Self {
        self.model.closed = ClosedForms::default();
        self
    }
    pub fn kind(mut self, kind: ModelKind<T>) -> Self {
        self.model.kind = kind;
        self
    }
    pub fn tolerance(mut self, tol: Tolerance<T>) -> Self {
        self.model.tol = tol;
        self
    }
    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.model.name = name.into();
        self
    }

    pub fn build(self) -> Result<LevyModel<T>> {
        let m = self.model;
        let alpha = m.class_alpha;
        if !self.class_set {
            return Err(Error::InvalidParameter(
                "class certificate (class_M, class_alpha) is required".into(),
            ));
        }
        if !(alpha > T::zero() && alpha < T::lit(2.0)) {
            return Err(Error::alpha(alpha.as_f64(), "class_alpha must lie in (0, 2)"));
        }
        if !(m.class_m > T::zero()) || !m.class_m.is_finite() {
            return Err(Error::InvalidParameter("class_M must be finite and > 0".into()));
        }
        if let Some(g) = m.global_m {
            if !(g > T::zero()) || !g.is_finite() {
                return Err(Error::InvalidParameter("global_M must be finite and > 0".into()));
            }
        }
        if !(m.extent_neg >= T::zero() && m.extent_pos >= T::zero()) {
            return Err(Error::InvalidParameter("support extents must be >= 0".into()));
        }
        if m.breakpoints.iter().any(|b| !(*b > T::zero() && b.is_finite())) {
            return Err(Error::InvalidParameter("breakpoints must be finite and > 0".into()));
        }
        if let Some(env) = &m.envelope {
            env.validate()?;
        }
        if let Some(cert) = &m.lipschitz {
            let positive = match cert.rule {
                LipschitzRule::Fixed { constant, lo, hi } => constant > T::zero() && lo >= T::zero() && hi > lo,
                LipschitzRule::Scaled { coef, .. } => coef > T::zero(),
            };
            if !positive || cert.class_m.is_some_and(|v| !(v > T::zero())) {
                return Err(Error::InvalidParameter(
                    "lipschitz certificate needs constant > 0 and lo < hi".into(),
                ));
            }
        }
        Ok(m)
    }
}
