//! Chernoff and Markov bounds for the small-jump martingale M_t(ε), and the
//! centering gap of a compound Poisson law.

use super::{check_positive, check_unit_eps, Assembly, BoundOptions, BoundResult, Target, Theorem};
use crate::{Error, Real, Result};

/// Log of the one-sided general Chernoff bound
/// e^{x/ε} (v/(xε+v))^{(xε+v)/ε²} with v = tσ².
fn ln_general<T: Real>(sigma2: T, eps: T, t: T, x: T) -> T {
    let v = t * sigma2;
    let xe = x * eps;
    x / eps - (xe + v) / (eps * eps) * (xe / v).ln_1p()
}

/// Log of the refined one-sided bound (eσ²/ε²)^{x/ε} e^{1/e} t^{x/ε}.
fn ln_refined<T: Real>(sigma2: T, eps: T, t: T, x: T) -> T {
    let k = x / eps;
    k * (T::one() + (sigma2 / (eps * eps)).ln() + t.ln()) + T::E().recip()
}

fn check_inputs<T: Real>(sigma2: T, eps: T, t: T, x: T) -> Result<()> {
    check_unit_eps(eps)?;
    check_positive("t", t)?;
    check_positive("x", x)?;
    if !(sigma2 >= T::zero() && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma2 must be >= 0, got {sigma2}")));
    }
    Ok(())
}

/// Chernoff bound on P(M_t(ε) > x) (or on P(|M_t(ε)| > x) when
/// `two_sided`). When tσ²/ε² ≤ 1 the refined form is also evaluated and the
/// smaller of the two is reported. A zero σ² means there are no jumps below
/// ε, and the bound is exactly 0.
pub fn chernoff_small_jumps<T: Real>(sigma2: T, eps: T, t: T, x: T, two_sided: bool) -> Result<BoundResult<T>> {
    check_inputs(sigma2, eps, t, x)?;
    let opts = BoundOptions::default();
    let sides = if two_sided { T::lit(2.0) } else { T::one() };
    if sigma2 == T::zero() {
        let mut asm = Assembly::new(Theorem::LemmaSj, "degenerate", Target::Probability, T::zero(), &opts);
        asm.note("sigma2 = 0: no jump mass below eps, bound is 0");
        asm.term("chernoff", T::zero());
        return Ok(asm.finish(t, T::infinity(), false, x / eps));
    }
    let general = ln_general(sigma2, eps, t, x).exp();
    let refinable = t * sigma2 / (eps * eps) <= T::one();
    let refined = refinable.then(|| ln_refined(sigma2, eps, t, x).exp());
    let (branch, one_sided) = match refined {
        Some(r) if r < general => ("refined", r),
        _ => ("general", general),
    };
    let mut asm = Assembly::new(Theorem::LemmaSj, branch, Target::Probability, T::zero(), &opts);
    asm.record("sigma2", sigma2);
    asm.record("general_one_sided", general);
    if let Some(r) = refined {
        asm.record("refined_one_sided", r);
    }
    asm.term("chernoff", sides * one_sided);
    Ok(asm.finish(t, T::infinity(), false, x / eps))
}

/// One-sided Chernoff bound on P(ΣW_t + M_t(ε) > x) with an independent
/// Brownian component of volatility `big_sigma`. At Σ = 0 this is exactly
/// the one-sided [`chernoff_small_jumps`].
pub fn chernoff_with_gaussian<T: Real>(sigma2: T, big_sigma: T, eps: T, t: T, x: T) -> Result<BoundResult<T>> {
    check_inputs(sigma2, eps, t, x)?;
    if !(big_sigma >= T::zero() && big_sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("Sigma must be >= 0, got {big_sigma}")));
    }
    if big_sigma == T::zero() {
        let mut r = chernoff_small_jumps(sigma2, eps, t, x, false)?;
        r.theorem = Theorem::LemmaSjGauss;
        r.notes.push("Sigma = 0: reduces to the small-jump Chernoff bound".to_string());
        return Ok(r);
    }
    if sigma2 == T::zero() {
        return Err(Error::DegenerateSigma(
            "with Sigma > 0 (a pure Gaussian tail is not covered)".to_string(),
        ));
    }
    let v = t * sigma2;
    let log_arg = (x * eps / v).ln_1p();
    let s2 = big_sigma * big_sigma;
    let ln_gauss = t * s2 / (T::lit(2.0) * eps * eps) * log_arg * log_arg;
    let general = ln_general(sigma2, eps, t, x);
    let opts = BoundOptions::default();
    let mut asm = Assembly::new(Theorem::LemmaSjGauss, "general", Target::Probability, T::zero(), &opts);
    asm.record("sigma2", sigma2);
    asm.record("Sigma", big_sigma);
    asm.record("general_one_sided", general.exp());
    asm.record("gaussian_factor", ln_gauss.exp());
    asm.record("gaussian_factor_majorant", (s2 * x / (T::lit(2.0) * eps * sigma2)).exp());
    asm.term("chernoff_gauss", (general + ln_gauss).exp());
    Ok(asm.finish(t, T::infinity(), false, x / eps))
}

/// Markov bound tσ²/ε² on P(M_t(ε) > ε), clamped to 1.
pub fn markov_baseline<T: Real>(sigma2: T, eps: T, t: T) -> T {
    (t * sigma2 / (eps * eps)).max(T::zero()).min(T::one())
}

/// Bound on the centering gap of a compound Poisson law with intensity
/// `lambda` ∈ (0, 2], jump mean `mean_jump` and jump density bounded by
/// `density_sup`.
pub fn ccpp_centering_gap<T: Real>(lambda: T, mean_jump: T, density_sup: T) -> Result<T> {
    if !(lambda > T::zero() && lambda <= T::lit(2.0)) {
        return Err(Error::LambdaOutOfRange(lambda.as_f64()));
    }
    if !(density_sup >= T::zero()) {
        return Err(Error::InvalidParameter(format!("density_sup must be >= 0, got {density_sup}")));
    }
    let weight = if lambda <= T::one() { lambda } else { lambda * lambda };
    Ok(T::lit(2.0) * weight * (-lambda).exp() * mean_jump.abs() * density_sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn general_form_at_unit_ratio() {
        // tσ² = ε², x = ε
        let eps = 0.5_f64;
        let t = 0.1;
        let sigma2 = eps * eps / t;
        let r = chernoff_small_jumps(sigma2, eps, t, eps, false).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::E / 4.0, max_relative = 1e-14);
        assert_eq!(r.branch, "general");
        let two = chernoff_small_jumps(sigma2, eps, t, eps, true).unwrap();
        assert_relative_eq!(two.raw_value, std::f64::consts::E / 2.0, max_relative = 1e-14);
        assert_eq!(two.value, 1.0);
    }

    #[test]
    fn degenerate_sigma_is_zero() {
        let r = chernoff_small_jumps(0.0_f64, 0.5, 0.1, 0.5, true).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(chernoff_with_gaussian(0.0_f64, 1.0, 0.5, 0.1, 0.5).is_err());
    }

    #[test]
    fn gaussian_hand_value() {
        let eps = 0.5_f64;
        let t = 0.1;
        let sigma2 = eps * eps / t;
        let big_sigma = (eps * eps / t).sqrt();
        let r = chernoff_with_gaussian(sigma2, big_sigma, eps, t, eps).unwrap();
        let expect = std::f64::consts::E / 4.0 * (0.5 * 2f64.ln().powi(2)).exp();
        assert_relative_eq!(r.value, expect, max_relative = 1e-13);
        assert_relative_eq!(r.value, 0.864_13, max_relative = 1e-4);
    }

    #[test]
    fn ccpp_values() {
        assert_eq!(ccpp_centering_gap(1.0_f64, 0.0, 3.0).unwrap(), 0.0);
        assert_relative_eq!(ccpp_centering_gap(1.0_f64, 0.5, 1.0).unwrap(), (-1.0f64).exp());
        assert!(matches!(ccpp_centering_gap(2.5_f64, 0.5, 1.0), Err(Error::LambdaOutOfRange(_))));
    }

    #[test]
    fn markov_clamps() {
        assert_eq!(markov_baseline(0.0_f64, 0.5, 0.1), 0.0);
        assert_eq!(markov_baseline(2.5_f64, 0.5, 0.1), 1.0);
        assert_relative_eq!(markov_baseline(4.0 / 3.0, 1.0_f64, 0.1), 0.133_333_333_333_333_33);
    }
}
