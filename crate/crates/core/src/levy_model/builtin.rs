//! Builtin processes with default certificates.

use super::{JumpLaw, LevyModel, LipschitzCert, ModelKind, TailEnvelope, Variation};
use crate::special::{expint_e1, gamma_p, gamma_q};
use crate::{Error, Real, Result};

/// Cauchy process, `f(x) = 1/(πx²)`, in 𝓛_{1/π,1} ∩ 𝓛_{1/π}.
///
/// Carries the Lipschitz certificate `128/(27π)·(ε∧1)^{−3}` on
/// `(3/4(ε∧1), 2ε − 3/4(ε∧1))`, i.e. `sup|f'|` over that interval.
pub fn cauchy<T: Real>() -> LevyModel<T> {
    let inv_pi = T::FRAC_1_PI();
    let two = T::lit(2.0);
    LevyModel::builder("cauchy", move |x: T| inv_pi / (x * x))
        .class(inv_pi, T::one())
        .global_m(Some(inv_pi))
        .variation(Variation::Infinite)
        .symmetric(true)
        .envelope(TailEnvelope::Power {
            coef: inv_pi,
            exponent: two,
            from: T::one(),
        })
        .lipschitz(Some(LipschitzCert::scaled(
            T::lit(128.0 / 27.0) * inv_pi,
            T::lit(3.0),
        )))
        .closed_lambda(move |a| two * inv_pi / a)
        .closed_sigma2(move |a| two * inv_pi * a)
        .kind(ModelKind::Cauchy)
        .build()
        .expect("valid builtin")
}

/// Gamma process, `f(x) = e^{−x}/x` on `(0, ∞)`; `X_t ~ Gamma(t, 1)`.
///
/// `sup_{0<x≤2} e^{−x}√x = e^{−1/2}/√2`, so the default certificate is
/// 𝓛_{M,1/2} with that M, and 𝓛_{1/e}.
pub fn gamma_process<T: Real>() -> LevyModel<T> {
    let m = T::lit((-0.5f64).exp() / 2f64.sqrt());
    LevyModel::builder("gamma", |x: T| {
        if x > T::zero() {
            (-x).exp() / x
        } else {
            T::zero()
        }
    })
    .class(m, T::lit(0.5))
    .global_m(Some((-T::one()).exp()))
    .variation(Variation::Finite)
    .support(T::zero(), T::infinity())
    .closed_lambda(expint_e1)
    .closed_sigma2(|a: T| T::one() - (-a).exp() * (T::one() + a))
    .closed_drift(|a: T| -(-a).exp_m1())
    .kind(ModelKind::Gamma)
    .build()
    .expect("valid builtin")
}

/// Inverse Gaussian subordinator, `f(x) = e^{−x} x^{−3/2}` on `(0, ∞)`.
///
/// `X_t` is inverse Gaussian with mean `t√π` and shape `2πt²`.
pub fn inverse_gaussian<T: Real>() -> LevyModel<T> {
    let half = T::lit(0.5);
    let three_halves = T::lit(1.5);
    let sqrt_pi = T::PI().sqrt();
    LevyModel::builder("inverse_gaussian", move |x: T| {
        if x > T::zero() {
            (-x).exp() * x.powf(-three_halves)
        } else {
            T::zero()
        }
    })
    .class(T::one(), half)
    .global_m(Some((-T::one()).exp()))
    .variation(Variation::Finite)
    .support(T::zero(), T::infinity())
    // Γ(−1/2, a) = 2e^{−a}/√a − 2Γ(1/2, a)
    .closed_lambda(move |a: T| {
        let two = T::lit(2.0);
        two * (-a).exp() / a.sqrt() - two * sqrt_pi * gamma_q(half, a)
    })
    .closed_sigma2(move |a: T| half * sqrt_pi * gamma_p(three_halves, a))
    .closed_drift(move |a: T| sqrt_pi * gamma_p(half, a))
    .kind(ModelKind::InverseGaussian)
    .build()
    .expect("valid builtin")
}

/// Symmetric α-stable density `scale·|x|^{−1−α}`.
pub fn stable<T: Real>(alpha: T, scale: T) -> Result<LevyModel<T>> {
    let two = T::lit(2.0);
    check_alpha(alpha)?;
    positive(scale, "scale")?;
    let p = T::one() + alpha;
    LevyModel::builder(format!("stable({alpha}, {scale})"), move |x: T| scale * x.abs().powf(-p))
        .class(scale, alpha)
        .global_m(Some(scale))
        .variation(variation_for(alpha))
        .symmetric(true)
        .envelope(TailEnvelope::Power {
            coef: scale,
            exponent: p,
            from: T::one(),
        })
        .closed_lambda(move |a: T| two * scale * a.powf(-alpha) / alpha)
        .closed_sigma2(move |a: T| two * scale * a.powf(two - alpha) / (two - alpha))
        .kind(ModelKind::Stable { alpha, scale })
        .build()
}

/// Symmetric tempered stable density `|x|^{−1−α} e^{−θ|x|}`.
pub fn tempered_stable<T: Real>(alpha: T, theta: T) -> Result<LevyModel<T>> {
    check_alpha(alpha)?;
    positive(theta, "theta")?;
    let p = T::one() + alpha;
    LevyModel::builder(format!("tempered_stable({alpha}, {theta})"), move |x: T| {
        let y = x.abs();
        y.powf(-p) * (-theta * y).exp()
    })
    .class(T::one(), alpha)
    .global_m(Some((-theta).exp()))
    .variation(variation_for(alpha))
    .symmetric(true)
    .envelope(TailEnvelope::Exponential {
        coef: T::one(),
        rate: theta,
        from: T::one(),
    })
    .kind(ModelKind::TemperedStable { alpha, theta })
    .build()
}

/// Truncated symmetric power law `M|x|^{−1−α}·1_{|x|≤cut}`.
pub fn power_law<T: Real>(m: T, alpha: T, cut: T) -> Result<LevyModel<T>> {
    let two = T::lit(2.0);
    check_alpha(alpha)?;
    positive(m, "M")?;
    positive(cut, "cut")?;
    let p = T::one() + alpha;
    LevyModel::builder(format!("power_law({m}, {alpha}, {cut})"), move |x: T| {
        let y = x.abs();
        if y <= cut {
            m * y.powf(-p)
        } else {
            T::zero()
        }
    })
    .class(m, alpha)
    .global_m(Some(m))
    .variation(variation_for(alpha))
    .symmetric(true)
    .support(cut, cut)
    .breakpoints(vec![cut])
    .closed_lambda(move |a: T| {
        if a >= cut {
            T::zero()
        } else {
            two * m * (a.powf(-alpha) - cut.powf(-alpha)) / alpha
        }
    })
    .closed_sigma2(move |a: T| two * m * a.min(cut).powf(two - alpha) / (two - alpha))
    .kind(ModelKind::PowerLaw { m, alpha, cut })
    .build()
}

/// Compound Poisson process with intensity `lambda` and jump law `law`.
///
/// The density `λ·g` is in 𝓛_{M,α} for every α; the certificate uses
/// `class_alpha` and the tightest M for the law's support on `[−2, 2]`.
pub fn cpp<T: Real>(lambda: T, law: JumpLaw<T>, class_alpha: T) -> Result<LevyModel<T>> {
    check_alpha(class_alpha)?;
    positive(lambda, "lambda")?;
    let two = T::lit(2.0);
    let p = T::one() + class_alpha;
    let class_m = law.cells().into_iter().fold(T::zero(), |acc, (l, r, prob)| {
        let (lo, hi) = (l.max(-two), r.min(two));
        if hi <= lo {
            return acc;
        }
        let far = lo.abs().max(hi.abs());
        acc.max(lambda * prob / (r - l) * far.powf(p))
    });
    let sup = lambda * law.density_sup();
    let (neg, pos) = law.extents();
    let symmetric = law.is_symmetric();
    let density_law = law.clone();
    let lam_law = law.clone();
    let s2_law = law.clone();
    let b_law = law.clone();
    LevyModel::builder(format!("cpp({lambda})"), move |x: T| lambda * density_law.density(x))
        .class(if class_m > T::zero() { class_m } else { T::min_positive_value().sqrt() }, class_alpha)
        .global_m(Some(if sup > T::zero() { sup } else { T::min_positive_value().sqrt() }))
        .variation(Variation::Finite)
        .symmetric(symmetric)
        .support(neg, pos)
        .breakpoints(law.breakpoints())
        .closed_lambda(move |a: T| lambda * lam_law.tail_abs(a))
        .closed_sigma2(move |a: T| lambda * s2_law.partial_moment(2, a, false))
        .closed_drift(move |a: T| lambda * b_law.partial_moment(1, a, true))
        .kind(ModelKind::CompoundPoisson { lambda, law })
        .build()
}

fn variation_for<T: Real>(alpha: T) -> Variation {
    if alpha < T::one() {
        Variation::Finite
    } else {
        Variation::Infinite
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::alpha(alpha.as_f64(), "alpha must lie in (0, 2)"))
    }
}

fn positive<T: Real>(v: T, what: &str) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} > 0 required, got {v}")))
    }
}

/// Symmetric stable-like density with a jump discontinuity at `|x| = eps`:
/// `stable_m·|x|^{−1−α}·1_{|x|≤2} + bump·1_{eps≤|x|≤eps+1}`.
///
/// The class constant is raised to cover the bump where it overlaps
/// `|x| ≤ 2`; there is no Lipschitz certificate.
pub fn discontinuous<T: Real>(alpha: T, eps: T, stable_m: T, bump: T) -> Result<LevyModel<T>> {
    check_alpha(alpha)?;
    positive(eps, "eps")?;
    positive(stable_m, "stable_M")?;
    positive(bump, "bump_height")?;
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let p = T::one() + alpha;
    let top = eps + T::one();
    let class_m = if eps <= two {
        stable_m + bump * top.min(two).powf(p)
    } else {
        stable_m
    };
    LevyModel::builder(format!("discontinuous({alpha}, {eps}, {stable_m}, {bump})"), move |x: T| {
        let y = x.abs();
        let mut v = T::zero();
        if y <= two {
            v = v + stable_m * y.powf(-p);
        }
        if y >= eps && y <= top {
            v = v + bump;
        }
        v
    })
    .class(class_m, alpha)
    .global_m(Some(stable_m + bump))
    .variation(variation_for(alpha))
    .symmetric(true)
    .support(two.max(top), two.max(top))
    .breakpoints(vec![eps, top, two])
    .closed_lambda(move |a: T| {
        let stable_part = if a < two {
            two * stable_m * (a.powf(-alpha) - two.powf(-alpha)) / alpha
        } else {
            T::zero()
        };
        stable_part + two * bump * (top - a.max(eps)).max(T::zero())
    })
    .closed_sigma2(move |a: T| {
        let stable_part = two * stable_m * a.min(two).powf(two - alpha) / (two - alpha);
        let hi = a.min(top);
        let bump_part = if hi > eps {
            two * bump * (hi.powi(3) - eps.powi(3)) / three
        } else {
            T::zero()
        };
        stable_part + bump_part
    })
    .build()
}
