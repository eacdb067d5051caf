//! Bounds for stable-type densities M₁|x|^{−1−α} ≤ f(x) ≤ M₂|x|^{−1−α} on
//! 0 < |x| ≤ 2, expressed in the single variable u = tλ_ε.
//!
//! The constants are assembled from the underlying residual bound term by
//! term. For ε ≤ 1 the lower bracket gives
//! λ_ε ≥ λ_{ε,2} ≥ 2M₁(ε^{−α} − 2^{−α})/α ≥ 2M₁(1 − 2^{−α})ε^{−α}/α,
//! hence ε^{−α} ≤ c λ_ε with c = α/(2M₁(1 − 2^{−α})) and λ_ε ≥ 1/c. A term
//! coef·t^a·λ_ε^q·ε^{−r} becomes coef·c^{r/α}·t^a·λ_ε^{q'} with
//! q' = q + r/α, which is at most coef·c^{r/α}·K^{a−R}·c^{a−q'}·u^R when
//! a ≥ R and q' ≤ a, K being the window on u and R the claimed order.

use serde::Serialize;

use super::{check_positive, check_unit_eps, Assembly, BoundOptions, BoundResult, Constant, Target, Theorem};
use crate::{Error, Real, Result};

/// Which underlying residual bound the corollary rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// α ∈ (0, 1), symmetric finite-variation bound.
    Fv,
    /// α ∈ [1, 2), no regularity near ε.
    IvGeneral,
    /// α ∈ [1, 2), Lipschitz near ε.
    IvLipschitz,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Fv => "fv",
            Variant::IvGeneral => "iv_general",
            Variant::IvLipschitz => "iv_lipschitz",
        }
    }

    pub fn from_name(s: &str) -> Option<Variant> {
        [Variant::Fv, Variant::IvGeneral, Variant::IvLipschitz]
            .into_iter()
            .find(|v| v.name() == s)
    }
}

/// Two-sided stable-type bracket. `lambda_one` is an upper bound on λ₁,
/// which the bracket alone does not control beyond |x| = 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableType<T> {
    pub m1: T,
    pub m2: T,
    pub alpha: T,
    pub lambda_one: T,
}

impl<T: Real> StableType<T> {
    /// c with ε^{−α} ≤ c λ_ε for ε ≤ 1.
    pub fn eps_factor(&self) -> T {
        self.alpha / (T::lit(2.0) * self.m1 * (T::one() - T::lit(2.0).powf(-self.alpha)))
    }

    /// Window K on u = tλ_ε for the given variant.
    pub fn window(&self, variant: Variant) -> T {
        let (one, two) = (T::one(), T::lit(2.0));
        let a = self.alpha;
        match variant {
            Variant::Fv | Variant::IvLipschitz => two.powf(-a) * (two - a) / a,
            Variant::IvGeneral => two.powf(one - a) * self.m2 * one.min((two - a) / (two * self.m2)) / a,
        }
    }
}

struct Term<T> {
    name: &'static str,
    coef: T,
    t_pow: T,
    lambda_pow: T,
    eps_pow: T,
}

/// Bound of the form A u², B u^{1+1/α}(1 + ln(B̃/u)·1_{α=1}) or C u² with
/// u = tλ_ε, for ε ∈ (0, 1]. `lambda_eps` is λ_ε of the process.
pub fn bound_stable_type<T: Real>(
    st: &StableType<T>,
    eps: T,
    t: T,
    lambda_eps: T,
    variant: Variant,
    opts: &BoundOptions<T>,
) -> Result<BoundResult<T>> {
    let StableType {
        m1,
        m2,
        alpha,
        lambda_one,
    } = *st;
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
    check_positive("M1", m1)?;
    if !(m2 >= m1) {
        return Err(Error::InvalidParameter(format!("M2 must be >= M1, got M1 = {m1}, M2 = {m2}")));
    }
    match variant {
        Variant::Fv if !(alpha > T::zero() && alpha < one) => {
            return Err(Error::alpha(alpha.as_f64(), "alpha must lie in (0, 1)"));
        }
        Variant::IvGeneral | Variant::IvLipschitz if !(alpha >= one && alpha < two) => {
            return Err(Error::alpha(alpha.as_f64(), "alpha must lie in [1, 2)"));
        }
        _ => {}
    }
    check_unit_eps(eps)?;
    check_positive("t", t)?;
    check_positive("lambda_eps", lambda_eps)?;
    if !(lambda_one >= T::zero() && lambda_one <= lambda_eps) {
        return Err(Error::InvalidParameter(format!(
            "lambda_one must lie in [0, lambda_eps], got {lambda_one}"
        )));
    }
    let c = st.eps_factor();
    let lambda_min = c.recip();
    let floor = two * m1 * (eps.powf(-alpha) - two.powf(-alpha)) / alpha;
    if lambda_eps < floor * (one - T::lit(1e-10)) {
        return Err(Error::InvalidParameter(format!(
            "lambda_eps = {lambda_eps} is below the bracket's floor {floor}"
        )));
    }
    let window = st.window(variant);
    let u = t * lambda_eps;
    if u > window {
        return Err(Error::WindowViolated {
            value: u.as_f64(),
            limit: window.as_f64(),
        });
    }

    let m = m2;
    let two_minus = two - alpha;
    let rate = match variant {
        Variant::IvGeneral => one + alpha.recip(),
        _ => two,
    };
    let mut asm = Assembly::new(Theorem::Corollary, variant.name(), Target::Residual, alpha, opts);
    asm.record("M1", m1);
    asm.record("M2", m2);
    asm.record("eps_factor", c);
    asm.record("lambda_min", lambda_min);
    asm.record("window", window);
    asm.record("lambda_eps", lambda_eps);
    asm.record("lambda_1", lambda_one);
    asm.record("u", u);

    let term = |name, coef, t_pow, lambda_pow, eps_pow| Term {
        name,
        coef,
        t_pow,
        lambda_pow,
        eps_pow,
    };
    let mut terms = Vec::new();
    let mut log_terms = Vec::new();
    let (t_max, strict) = match variant {
        Variant::Fv => {
            let c2 = asm.constant(Constant::C2, None, None)?;
            let d3 = asm.constant(Constant::D3, None, None)?;
            terms.push(term("c2_d3", two * m * m * (c2 + d3), two, T::zero(), two * alpha));
            // λ_{2ε} ≤ λ_ε
            terms.push(term("lambda", m / (two * two_minus) * T::lit(5.0), two, one, alpha));
            terms.push(term("poisson", two, two, two, T::zero()));
            (eps.powf(alpha) * two_minus / m * two.powf(-alpha - one), true)
        }
        Variant::IvGeneral => {
            let g1 = asm.constant(Constant::G1, Some(m), None)?;
            let g2 = asm.constant(Constant::G2, Some(m), None)?;
            terms.push(term("g1", g1, rate, T::zero(), one + alpha));
            terms.push(term("g2", g2, two, T::zero(), two * alpha));
            terms.push(term("lambda_1", T::lit(5.0) * m / two_minus * lambda_one, two, T::zero(), two));
            terms.push(term("poisson", two, two, two, T::zero()));
            if alpha == one {
                log_terms.push(term("log_small", T::lit(16.0) * m * m, two, T::zero(), two));
            }
            ((eps / two).powf(alpha) * one.min(two_minus / (two * m)), true)
        }
        Variant::IvLipschitz => {
            let f1 = asm.constant(Constant::F1, None, None)?;
            let f2 = asm.constant(Constant::F2, None, Some(eps))?;
            let f5 = asm.constant(Constant::F5, None, None)?;
            terms.push(term("f1", m * m * f1, two, T::zero(), two * alpha));
            terms.push(term("f2", m * m * lambda_one * f2, two, T::zero(), alpha));
            terms.push(term("poisson", two * lambda_one * lambda_one, two, T::zero(), T::zero()));
            terms.push(term("f5", m.powi(4) * f5, four, T::zero(), four * alpha));
            ((two - alpha) * eps.powf(alpha) / (two.powf(one + alpha) * m), false)
        }
    };

    let slack = T::lit(1e-12);
    let mut convert = |tm: &Term<T>| -> Result<T> {
        let q = tm.lambda_pow + tm.eps_pow / alpha;
        if tm.t_pow < rate - slack || q > tm.t_pow + slack {
            return Err(Error::InvalidParameter(format!(
                "term {} cannot be written in u = t*lambda_eps",
                tm.name
            )));
        }
        let v = tm.coef * c.powf(tm.eps_pow / alpha) * window.powf(tm.t_pow - rate) * lambda_min.powf(q - tm.t_pow);
        asm.record(&format!("coef:{}", tm.name), v);
        Ok(v)
    };
    let mut plain = T::zero();
    for tm in &terms {
        plain = plain + convert(tm)?;
    }
    let mut logged = T::zero();
    for tm in &log_terms {
        logged = logged + convert(tm)?;
    }

    let value = if log_terms.is_empty() {
        asm.record(
            match variant {
                Variant::Fv => "A",
                Variant::IvGeneral => "B",
                Variant::IvLipschitz => "C",
            },
            plain,
        );
        plain * u.powf(rate)
    } else {
        // ε λ_ε ≤ 2M₂ + λ₁ at α = 1, so ln(ε/(2t)) ≤ ln(B̃/u).
        let b = plain.max(logged);
        let b_tilde = (two * m2 + lambda_one) / two;
        asm.record("B", b);
        asm.record("B_tilde", b_tilde);
        b * u.powf(rate) * (one + (b_tilde / u).ln())
    };
    asm.term("stable_type", value);
    Ok(asm.finish(t, t_max, strict, rate))
}
