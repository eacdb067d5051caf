//! Property tests for functionals, bounds and exact tails.

use levy_tail::bounds::{
    bound_cdf_fv, by_theorem, chernoff_small_jumps, chernoff_with_gaussian, constant, BoundOptions, Constant, Theorem,
};
use levy_tail::closed_forms::{cauchy_tail, gamma_tail};
use levy_tail::levy_model::{class_functional_bounds, power_law, tempered_stable, verify_class_membership};
use levy_tail::Model;
use proptest::prelude::*;

/// Combined tolerance for comparing two functional values.
fn tol(a: &levy_tail::Functional, b: &levy_tail::Functional) -> f64 {
    a.abs_error_estimate + b.abs_error_estimate + 1e-12 * a.value.abs().max(b.value.abs())
}

fn model_strategy() -> impl Strategy<Value = Model> {
    prop_oneof![
        (0.2f64..3.0, 0.1f64..1.9, 0.5f64..2.0).prop_map(|(m, a, cut)| power_law(m, a, cut).unwrap()),
        (0.1f64..1.9, 0.5f64..3.0).prop_map(|(a, theta)| tempered_stable(a, theta).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lambda_decreases_and_sigma2_increases(model in model_strategy(), a in 1e-3f64..1.5, step in 1.01f64..3.0) {
        let b = a * step;
        let (la, lb) = (model.quad_lambda(a).unwrap(), model.quad_lambda(b).unwrap());
        let (sa, sb) = (model.quad_sigma2(a).unwrap(), model.quad_sigma2(b).unwrap());
        prop_assert!(la.value + tol(&la, &lb) >= lb.value);
        prop_assert!(sa.value <= sb.value + tol(&sa, &sb));
    }

    #[test]
    fn lambda_is_additive(model in model_strategy(), a in 1e-3f64..1.5, step in 1.0f64..3.0) {
        let b = a * step;
        let la = model.quad_lambda(a).unwrap();
        let lb = model.quad_lambda(b).unwrap();
        let band = model.quad_lambda_band(a, b).unwrap();
        let combined = 2.0 * (la.abs_error_estimate + lb.abs_error_estimate + band.abs_error_estimate)
            + 1e-12 * la.value;
        prop_assert!((la.value - (band.value + lb.value)).abs() <= combined,
            "{} vs {} + {}", la.value, band.value, lb.value);
    }

    #[test]
    fn class_bounds_dominate(model in model_strategy(), x in 1e-3f64..2.0) {
        prop_assume!(verify_class_membership(&model, 200).passed);
        let cb = class_functional_bounds(model.class_m(), model.class_alpha(), x).unwrap();
        let slack = 1.0 + 1e-9;
        prop_assert!(model.quad_sigma2(x).unwrap().value / (x * x) <= cb.sigma2_over_x2 * slack);
        prop_assert!(model.quad_lambda_band(x, 2.0).unwrap().value <= cb.lambda * slack);
        if model.class_alpha() < 1.0 {
            prop_assert!(model.quad_drift(x).unwrap().value.abs() <= cb.drift().unwrap() * slack);
        }
    }

    #[test]
    fn valid_iff_threshold_holds(model in model_strategy(), eps in 0.05f64..1.0, log_t in -8.0f64..0.0) {
        let t = 10f64.powf(log_t);
        let theorems: &[Theorem] = if model.class_alpha() < 1.0 {
            &[Theorem::Ps1, Theorem::Teo1]
        } else {
            &[Theorem::Ps2, Theorem::Lambda2bis]
        };
        for &th in theorems {
            let Ok(b) = by_theorem(&model, th, eps, t, &BoundOptions::default()) else { continue };
            let holds = if b.strict { t < b.t_max } else { t <= b.t_max };
            prop_assert_eq!(b.valid, holds, "{:?} t = {} t_max = {}", th, t, b.t_max);
        }
    }

    #[test]
    fn gaussian_free_chernoff_matches_small_jump_chernoff(
        sigma2 in 1e-4f64..10.0, eps in 0.01f64..=1.0, t in 1e-6f64..1.0, x_frac in 0.1f64..5.0,
    ) {
        let x = eps * x_frac;
        let plain = chernoff_small_jumps(sigma2, eps, t, x, false).unwrap();
        let gauss = chernoff_with_gaussian(sigma2, 0.0, eps, t, x).unwrap();
        prop_assert_eq!(plain.raw_value.to_bits(), gauss.raw_value.to_bits());
    }

    #[test]
    fn fv_bound_without_large_jumps(m in 0.2f64..3.0, alpha in 0.1f64..0.9, eps in 0.1f64..1.0, t_frac in 0.01f64..1.0) {
        // jumps never exceed ε, so only the constant term survives
        let model = power_law(m, alpha, eps).unwrap();
        let probe = bound_cdf_fv(&model, eps, 1e-12, &BoundOptions::default()).unwrap();
        let t = probe.t_max * t_frac;
        let b = bound_cdf_fv(&model, eps, t, &BoundOptions::default()).unwrap();
        let c2 = constant(Constant::C2, alpha, None, None).unwrap();
        let d3 = constant(Constant::D3, alpha, None, None).unwrap();
        let expected = 2.0 * t * t * m * m * (c2 + d3) * eps.powf(-2.0 * alpha);
        prop_assert!((b.raw_value - expected).abs() <= 4.0 * f64::EPSILON * expected,
            "{} vs {}", b.raw_value, expected);
    }

    #[test]
    fn cauchy_tail_is_scale_free(eps in 1e-3f64..10.0, t in 1e-4f64..10.0, scale in 0.1f64..10.0) {
        let p = cauchy_tail(eps, t).unwrap().prob;
        let q = cauchy_tail(scale * eps, scale * t).unwrap().prob;
        prop_assert!((p - q).abs() <= 8.0 * f64::EPSILON * p.max(f64::MIN_POSITIVE), "{p} vs {q}");
    }

    #[test]
    fn gamma_tail_is_monotone(eps in 0.05f64..5.0, t in 1e-3f64..0.45, step in 1.01f64..2.0) {
        let p = gamma_tail(eps, t).unwrap().prob;
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(gamma_tail(eps * step, t).unwrap().prob <= p + 1e-15);
        prop_assert!(gamma_tail(eps, t * step).unwrap().prob >= p - 1e-15);
    }
}
