//! Picking a residual bound for a model.

use super::{
    bound_cdf_fv, bound_cdf_iv_general, bound_cdf_iv_lipschitz, bound_smalljump_fv, bound_smalljump_iv,
    bound_stable_type, BoundOptions, BoundResult, StableType, Theorem, Variant,
};
use crate::levy_model::{LevyModel, ModelKind, Variation};
use crate::{Error, Real, Result};

/// Evaluates every residual bound that applies to `model` and returns the
/// smallest valid one. Ties go to the theorem with the smaller rate exponent.
pub fn auto_select<T: Real>(model: &LevyModel<T>, eps: T, t: T) -> Result<BoundResult<T>> {
    auto_select_with(model, eps, t, &BoundOptions::default())
}

/// [`auto_select`] with explicit options.
pub fn auto_select_with<T: Real>(
    model: &LevyModel<T>,
    eps: T,
    t: T,
    opts: &BoundOptions<T>,
) -> Result<BoundResult<T>> {
    let candidates = match model.variation() {
        Some(Variation::Finite) => vec![bound_cdf_fv(model, eps, t, opts)],
        Some(Variation::Infinite) => vec![
            bound_cdf_iv_general(model, eps, t, opts),
            bound_cdf_iv_lipschitz(model, eps, t, opts),
        ],
        None => return Err(Error::UndeclaredVariation),
    };
    candidates
        .into_iter()
        .filter_map(|r| r.ok())
        .filter(|r| r.valid && r.raw_value.is_finite())
        .min_by(|a, b| {
            a.value
                .partial_cmp(&b.value)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.rate_exponent.partial_cmp(&b.rate_exponent).unwrap_or(std::cmp::Ordering::Equal))
        })
        .ok_or(Error::NoApplicableBound {
            eps: eps.as_f64(),
            t: t.as_f64(),
        })
}

/// Lower bracket M₁ with M₁|x|^{−1−α} ≤ f(x) on 0 < |x| ≤ 2, known for the
/// stable-type builtins.
fn lower_bracket<T: Real>(model: &LevyModel<T>) -> Option<T> {
    match *model.kind() {
        ModelKind::Stable { scale, .. } => Some(scale),
        ModelKind::PowerLaw { m, cut, .. } if cut >= T::lit(2.0) => Some(m),
        ModelKind::TemperedStable { theta, .. } => Some((-T::lit(2.0) * theta).exp()),
        _ => None,
    }
}

/// Evaluates one named bound on `model`. Small-jump bounds use the class
/// certificates; the corollary needs a stable-type builtin.
pub fn by_theorem<T: Real>(
    model: &LevyModel<T>,
    theorem: Theorem,
    eps: T,
    t: T,
    opts: &BoundOptions<T>,
) -> Result<BoundResult<T>> {
    let alpha = model.class_alpha();
    match theorem {
        Theorem::Ps1 => {
            if model.variation() != Some(Variation::Finite) {
                return Err(Error::WrongVariation { expected: "finite" });
            }
            bound_smalljump_fv(model.class_m(), alpha, eps, t, model.symmetric(), opts)
        }
        Theorem::Teo1 => bound_cdf_fv(model, eps, t, opts),
        Theorem::Ps2 => {
            if !model.symmetric() {
                return Err(Error::NotSymmetric);
            }
            bound_smalljump_iv(model.class_m(), alpha, eps, t, opts)
        }
        Theorem::Lambda2bis => bound_cdf_iv_general(model, eps, t, opts),
        Theorem::Lambda2 => bound_cdf_iv_lipschitz(model, eps, t, opts),
        Theorem::Corollary => {
            if !model.symmetric() {
                return Err(Error::NotSymmetric);
            }
            let m1 = lower_bracket(model).ok_or_else(|| {
                Error::InvalidParameter("the corollary needs a stable-type model with a known lower bracket".into())
            })?;
            let lam = model.lambda(eps)?;
            let lam1 = model.lambda(T::one())?;
            let st = StableType {
                m1,
                m2: model.class_m().max(model.global_m().unwrap_or(T::zero())),
                alpha,
                lambda_one: (lam1.value + lam1.abs_error_estimate).min(lam.value),
            };
            let variant = if alpha < T::one() {
                Variant::Fv
            } else if model.lipschitz().is_some() {
                Variant::IvLipschitz
            } else {
                Variant::IvGeneral
            };
            bound_stable_type(&st, eps, t, lam.value + lam.abs_error_estimate, variant, opts)
        }
        other => Err(Error::InvalidParameter(format!(
            "{other} is not a model-level bound; use the concentration functions"
        ))),
    }
}
