//! Small-time expansions of P(|X_t| > ε) and of the small-jump tail.

use super::{check_positive, check_unit_eps, scale_c, Assembly, BoundOptions, BoundResult, Constant, Target, Theorem};
use crate::levy_model::{FunctionalValue, LevyModel, Variation};
use crate::{Error, Real, Result};

/// Upper end of a functional's error bar.
fn upper<T: Real>(v: FunctionalValue<T>) -> T {
    (v.value + v.abs_error_estimate).max(T::zero())
}

fn check_fv_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::alpha(alpha.as_f64(), "alpha must lie in (0, 1)"))
    }
}

fn check_iv_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha >= T::one() && alpha < T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::alpha(alpha.as_f64(), "alpha must lie in [1, 2)"))
    }
}

/// Small-jump bound for α ∈ (0, 1). The general branch bounds
/// P(|t b(ε) + M_t(ε)| ≥ ε); with `symmetric` the drift vanishes and the
/// bound is on P(|M_t(ε)| ≥ ε).
pub fn bound_smalljump_fv<T: Real>(
    m: T,
    alpha: T,
    eps: T,
    t: T,
    symmetric: bool,
    opts: &BoundOptions<T>,
) -> Result<BoundResult<T>> {
    check_fv_alpha(alpha)?;
    check_positive("M", m)?;
    check_unit_eps(eps)?;
    check_positive("t", t)?;
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
    let scale = two * t * t * m * m * eps.powf(-two * alpha);
    if symmetric {
        let mut asm = Assembly::new(
            Theorem::Ps1,
            "symmetric",
            Target::SmallJumps { two_sided: true },
            alpha,
            opts,
        );
        let c2 = asm.constant(Constant::C2, None, None)?;
        asm.term("c2", scale * c2);
        let t_max = eps.powf(alpha) * (two - alpha) / (m * two.powf(alpha + one));
        Ok(asm.finish(t, t_max, false, two))
    } else {
        let mut asm = Assembly::new(Theorem::Ps1, "general", Target::DriftedSmallJumps, alpha, opts);
        let c1 = asm.constant(Constant::C1, None, None)?;
        asm.term("c1", scale * c1);
        let t_max = (one - alpha) * eps.powf(alpha) / (m * four.powf(one + alpha));
        Ok(asm.finish(t, t_max, false, two))
    }
}

/// Residual bound |P(|X_t| > ε) − λ_ε t| for finite-variation models with
/// α ∈ (0, 1). Four branches: ε ≤ 1 or ε > 1, general or symmetric. The
/// ε > 1 branches use M = max(class M, global M) so that the density lies in
/// both classes with one constant.
pub fn bound_cdf_fv<T: Real>(model: &LevyModel<T>, eps: T, t: T, opts: &BoundOptions<T>) -> Result<BoundResult<T>> {
    if model.variation() != Some(Variation::Finite) {
        return Err(Error::WrongVariation { expected: "finite" });
    }
    let alpha = model.class_alpha();
    check_fv_alpha(alpha)?;
    check_positive("eps", eps)?;
    check_positive("t", t)?;
    let (one, two, four, five) = (T::one(), T::lit(2.0), T::lit(4.0), T::lit(5.0));
    let small = eps <= one;
    let m = if small {
        model.class_m()
    } else {
        model.global_m().ok_or(Error::MissingGlobalM)?.max(model.class_m())
    };
    let t2 = t * t;
    let two_minus = two - alpha;

    match (model.symmetric(), small) {
        (false, true) => {
            let mut asm = Assembly::new(Theorem::Teo1, "general_eps_le_1", Target::Residual, alpha, opts);
            let lam = upper(model.lambda(eps)?);
            asm.record("M", m);
            asm.record("lambda_eps", lam);
            let c1 = asm.constant(Constant::C1, None, None)?;
            let d1 = asm.constant(Constant::D1, None, None)?;
            let d2 = asm.constant(Constant::D2, None, None)?;
            let e_a = eps.powf(-alpha);
            asm.term("c1_d1", t2 * m * m * e_a * e_a * (two * c1 + d1));
            asm.term("d2", t2 * m * lam * e_a * d2);
            asm.term("poisson", two * t2 * lam * lam);
            let t_max = (one - alpha) / m * eps.powf(alpha) * four.powf(-(one + alpha));
            Ok(asm.finish(t, t_max, true, two))
        }
        (false, false) => {
            let mut asm = Assembly::new(Theorem::Teo1, "general_eps_gt_1", Target::Residual, alpha, opts);
            let lam1 = upper(model.lambda(one)?);
            let lam2 = upper(model.lambda(two)?);
            let b1 = model.drift(one)?;
            let b1_abs = b1.value.abs();
            asm.record("M", m);
            asm.record("lambda_1", lam1);
            asm.record("lambda_2", lam2);
            asm.record("b_1", b1.value);
            let c1 = asm.constant(Constant::C1, None, None)?;
            let td1 = asm.constant(Constant::TildeD1, None, None)?;
            asm.term("c1_td1", two * m * m * t2 * (td1 + c1));
            asm.term("poisson", two * t2 * lam1 * lam1);
            let far = T::lit(1.5) + t * b1_abs;
            let far_term = if eps > far {
                two * m * t2 * (four / two_minus * (eps - far))
            } else {
                T::zero()
            };
            asm.term("far", far_term);
            let near = if eps < one + two * t * b1_abs {
                four * five.powf(alpha)
            } else {
                T::zero()
            };
            asm.term("near", m * t2 * near);
            asm.term(
                "tail",
                m * t2 * (T::lit(8.0) / five + T::lit(1.5) * lam2 + four * lam1 / two_minus),
            );
            asm.note("lambda_2 coefficient 3/2 as in the theorem statement; the supporting lemma carries 3");
            let t_max = (one - alpha) / (five * m);
            Ok(asm.finish(t, t_max, true, two))
        }
        (true, true) => {
            let mut asm = Assembly::new(Theorem::Teo1, "symmetric_eps_le_1", Target::Residual, alpha, opts);
            let lam = upper(model.lambda(eps)?);
            let lam2e = upper(model.lambda(two * eps)?);
            asm.record("M", m);
            asm.record("lambda_eps", lam);
            asm.record("lambda_2eps", lam2e);
            let c2 = asm.constant(Constant::C2, None, None)?;
            let d3 = asm.constant(Constant::D3, None, None)?;
            let e_a = eps.powf(-alpha);
            asm.term("c2_d3", two * t2 * m * m * eps.powf(-two * alpha) * (c2 + d3));
            asm.term(
                "lambda",
                t2 * m / (two * two_minus) * (lam * e_a + four * lam2e * e_a),
            );
            asm.term("poisson", two * t2 * lam * lam);
            let t_max = eps.powf(alpha) * two_minus / m * two.powf(-alpha - one);
            Ok(asm.finish(t, t_max, true, two))
        }
        (true, false) => {
            let mut asm = Assembly::new(Theorem::Teo1, "symmetric_eps_gt_1", Target::Residual, alpha, opts);
            let lam1 = upper(model.lambda(one)?);
            let lam1e = upper(model.lambda(one + eps)?);
            asm.record("M", m);
            asm.record("lambda_1", lam1);
            asm.record("lambda_1_plus_eps", lam1e);
            let c2 = asm.constant(Constant::C2, None, None)?;
            asm.term("c2", two * t2 * m * m * c2);
            asm.term(
                "lambda",
                t2 * m / two_minus
                    * (lam1 * two.powf(-alpha) + four * m / (alpha * (one - alpha)) + lam1e),
            );
            asm.term("poisson", two * t2 * lam1 * lam1);
            let t_max = two_minus / m * two.powf(-alpha - one);
            Ok(asm.finish(t, t_max, true, two))
        }
    }
}

/// Small-jump bound for symmetric models with α ∈ [1, 2). For α ∈ (1, 2) it
/// bounds P(|M_t(ε)| ≥ ε); at α = 1 it bounds the one-sided P(M_t(ε) ≥ ε)
/// unless `opts.two_sided` doubles it.
pub fn bound_smalljump_iv<T: Real>(m: T, alpha: T, eps: T, t: T, opts: &BoundOptions<T>) -> Result<BoundResult<T>> {
    check_iv_alpha(alpha)?;
    check_positive("M", m)?;
    check_unit_eps(eps)?;
    check_positive("t", t)?;
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
    let two_minus = two - alpha;
    let t_max = (eps / two).powf(alpha) * one.min(two_minus / (two * m));
    if alpha > one {
        let mut asm = Assembly::new(
            Theorem::Ps2,
            "alpha_gt_1",
            Target::SmallJumps { two_sided: true },
            alpha,
            opts,
        );
        let e1 = asm.constant(Constant::E1, None, None)?;
        let rate = one + alpha.recip();
        asm.term(
            "stable",
            two.powf(two + alpha) * m * t.powf(rate) * eps.powf(-(one + alpha))
                * (one + m / (alpha * two_minus * (alpha - one))),
        );
        asm.term("e1", two * t * t * m * m * e1 * eps.powf(-two * alpha));
        Ok(asm.finish(t, t_max, true, rate))
    } else {
        let sides = if opts.two_sided { two } else { one };
        let mut asm = Assembly::new(
            Theorem::Ps2,
            "alpha_eq_1",
            Target::SmallJumps { two_sided: opts.two_sided },
            alpha,
            opts,
        );
        let t2e = t * t / (eps * eps);
        asm.record("sides", sides);
        asm.term(
            "main",
            sides * four * t2e * m * m * (super::e_two::<T>() + T::lit(37.0) / T::lit(9.0)),
        );
        asm.term("linear", sides * four * m * t2e);
        asm.term("log", sides * T::lit(16.0) * m * m * t2e * (eps / (two * t)).ln());
        Ok(asm.finish(t, t_max, true, two))
    }
}

fn symmetric_iv<T: Real>(model: &LevyModel<T>) -> Result<T> {
    if !model.symmetric() {
        return Err(Error::NotSymmetric);
    }
    let alpha = model.class_alpha();
    check_iv_alpha(alpha)?;
    Ok(alpha)
}

/// Residual bound for symmetric infinite-variation models without regularity
/// near ε, of order t^{1+1/α}. Needs the density in both classes; the bound
/// uses M = max(class M, global M).
pub fn bound_cdf_iv_general<T: Real>(
    model: &LevyModel<T>,
    eps: T,
    t: T,
    opts: &BoundOptions<T>,
) -> Result<BoundResult<T>> {
    let alpha = symmetric_iv(model)?;
    check_positive("eps", eps)?;
    check_positive("t", t)?;
    let global = model.global_m().ok_or(Error::MissingGlobalM)?;
    let m = global.max(model.class_m());
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
    let two_minus = two - alpha;
    let rho = eps.min(one);
    let t2 = t * t;
    let rate = one + alpha.recip();

    let mut asm = Assembly::new(Theorem::Lambda2bis, "symmetric", Target::Residual, alpha, opts);
    let lam1 = upper(model.lambda(one)?);
    let lam_rho = upper(model.lambda(rho)?);
    let c = scale_c(alpha, m);
    asm.record("M", m);
    asm.record("C", c);
    asm.record("lambda_1", lam1);
    asm.record("lambda_rho", lam_rho);
    let g1 = asm.constant(Constant::G1, Some(m), None)?;
    let g2 = asm.constant(Constant::G2, Some(m), None)?;
    asm.term("g1", g1 * t.powf(rate) * rho.powf(-(one + alpha)));
    asm.term("g2", g2 * t2 * rho.powf(-two * alpha));
    asm.term("lambda_1", T::lit(5.0) * m / two_minus * t2 * lam1 / (rho * rho));
    let far = if eps > two {
        four * m * m * t2 * eps / two_minus
    } else {
        T::zero()
    };
    asm.term("far", far);
    if alpha == one {
        // 0 ln 0 = 0; an empty integration range contributes nothing, so a
        // negative logarithm is dropped as well.
        let width = one.min(eps).min((eps - one).max(T::zero()));
        let near = if width > T::zero() {
            (c * width / t).ln().max(T::zero())
        } else {
            T::zero()
        };
        asm.term("log_near", m * m * t2 * T::lit(12.0) / rho * near);
        asm.term("log_small", m * m * t2 * T::lit(16.0) / (eps * eps) * (eps / (two * t)).ln());
    }
    asm.term("poisson", two * lam_rho * lam_rho * t2);
    let t_max = (rho / two).powf(alpha) * one.min(two_minus / (two * m));
    Ok(asm.finish(t, t_max, true, rate))
}

/// Residual bound of order t² for symmetric infinite-variation models whose
/// density is Lipschitz around ε. The certificate may carry an enlarged
/// class constant; the bound is evaluated with the larger of the two.
pub fn bound_cdf_iv_lipschitz<T: Real>(
    model: &LevyModel<T>,
    eps: T,
    t: T,
    opts: &BoundOptions<T>,
) -> Result<BoundResult<T>> {
    let alpha = symmetric_iv(model)?;
    check_positive("eps", eps)?;
    check_positive("t", t)?;
    let cert = model.lipschitz().ok_or(Error::MissingLipschitzCert)?;
    let lip = cert.constant_at(eps).ok_or(Error::MissingLipschitzCert)?;
    let m = cert.class_m.map_or(model.class_m(), |cm| cm.max(model.class_m()));
    let (one, two) = (T::one(), T::lit(2.0));
    let rho = eps.min(one);
    let allowed = m * rho.powf(-(two + alpha));
    if lip > allowed * (one + T::lit(1e-12)) {
        return Err(Error::CertTooWeak {
            constant: lip.as_f64(),
            allowed: allowed.as_f64(),
        });
    }
    let t2 = t * t;
    let mut asm = Assembly::new(
        Theorem::Lambda2,
        if eps <= one { "eps_le_1" } else { "eps_gt_1" },
        Target::Residual,
        alpha,
        opts,
    );
    let lam1 = upper(model.lambda(one)?);
    asm.record("M", m);
    asm.record("lipschitz", lip);
    asm.record("lambda_1", lam1);
    if eps <= one {
        let f1 = asm.constant(Constant::F1, None, None)?;
        let f2 = asm.constant(Constant::F2, None, Some(eps))?;
        asm.term("f1", t2 * m * m * f1 * eps.powf(-two * alpha));
        asm.term("f2", t2 * m * m * lam1 * eps.powf(-alpha) * f2);
    } else {
        let f3 = asm.constant(Constant::F3, None, Some(eps))?;
        let f4 = asm.constant(Constant::F4, None, None)?;
        asm.term("f3", t2 * m * m * eps * eps * f3);
        asm.term("f4", t2 * m * m * f4);
    }
    asm.term("poisson", two * t2 * lam1 * lam1);
    let f5 = asm.constant(Constant::F5, None, None)?;
    asm.term("f5", t2 * t2 * m.powi(4) * f5 * rho.powf(-T::lit(4.0) * alpha));
    let t_max = (two - alpha) * rho.powf(alpha) / (two.powf(one + alpha) * m);
    Ok(asm.finish(t, t_max, false, two))
}
