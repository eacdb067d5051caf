//! Exact tail probabilities P(|X_t| > ε) for processes whose marginal law is
//! known: Cauchy, Gamma, inverse Gaussian and compound Poisson.

use serde::Serialize;

use crate::levy_model::JumpLaw;
use crate::quadrature::{integrate_log, Tolerance};
use crate::special::{gamma_p, gamma_q, ln_poisson_pmf};
use crate::{Error, Real, Result};

/// Number of grid cells used for compound Poisson convolutions.
pub const CONVOLUTION_CELLS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Arctan,
    IncompleteGamma,
    QuadratureIg,
    PoissonSum,
}

/// An exact tail probability with its numerical error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactTail<T> {
    pub prob: T,
    pub method: Method,
    pub abs_error: T,
}

fn check_args<T: Real>(eps: T, t: T) -> Result<()> {
    if !(eps > T::zero() && eps.is_finite()) {
        return Err(Error::InvalidCutoff(format!("eps > 0 required, got {eps}")));
    }
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t > 0 required, got {t}")));
    }
    Ok(())
}

fn clamp_prob<T: Real>(p: T) -> T {
    p.max(T::zero()).min(T::one())
}

/// Cauchy process with density 1/(πx²): (2/π) arctan(t/ε).
pub fn cauchy_tail<T: Real>(eps: T, t: T) -> Result<ExactTail<T>> {
    check_args(eps, t)?;
    let prob = T::FRAC_2_PI() * (t / eps).atan();
    Ok(ExactTail {
        prob,
        method: Method::Arctan,
        abs_error: prob * T::epsilon() * T::lit(4.0),
    })
}

/// Gamma process with density e^{−x}/x on (0, ∞): Γ(t, ε)/Γ(t), for
/// shape 0 < t < 1.
pub fn gamma_tail<T: Real>(eps: T, t: T) -> Result<ExactTail<T>> {
    check_args(eps, t)?;
    if t >= T::one() {
        return Err(Error::ShapeTooLarge(t.as_f64()));
    }
    let prob = clamp_prob(gamma_q(t, eps));
    Ok(ExactTail {
        prob,
        method: Method::IncompleteGamma,
        abs_error: prob.max(T::min_positive_value()) * T::epsilon() * T::lit(256.0),
    })
}

/// Inverse Gaussian process with density e^{−x}x^{−3/2} on (0, ∞):
/// t e^{2t√π} ∫_ε^∞ e^{−x−πt²/x} x^{−3/2} dx.
pub fn ig_tail<T: Real>(eps: T, t: T) -> Result<ExactTail<T>> {
    ig_tail_with(eps, t, &Tolerance::default())
}

/// [`ig_tail`] with an explicit quadrature tolerance.
pub fn ig_tail_with<T: Real>(eps: T, t: T, tol: &Tolerance<T>) -> Result<ExactTail<T>> {
    check_args(eps, t)?;
    let pi = T::PI();
    let b = pi * t * t;
    let integrand = |x: T| (-x - b / x).exp() * x.powf(T::lit(-1.5));
    // ∫_X^∞ e^{−x} x^{−3/2} dx ≤ e^{−X} X^{−3/2}
    let hi = eps + T::lit(60.0);
    let remainder = (-hi).exp() * hi.powf(T::lit(-1.5));
    let split = eps.max(b);
    let est = integrate_log(integrand, eps, hi, &[split], tol)?;
    let scale = t * (T::lit(2.0) * t * pi.sqrt()).exp();
    Ok(ExactTail {
        prob: clamp_prob(scale * est.value),
        method: Method::QuadratureIg,
        abs_error: scale * (est.abs_error + remainder),
    })
}

/// Smallest n with P(N > n) ≤ `tol` for N ~ Poisson(`mean`).
pub fn poisson_cutoff<T: Real>(mean: T, tol: T) -> usize {
    let mut n = 1;
    while n < 10_000 && gamma_p(T::lit((n + 1) as f64), mean) > tol {
        n += 1;
    }
    n
}

fn law_cdf<T: Real>(law: &JumpLaw<T>, x: T) -> T {
    law.cells().into_iter().fold(T::zero(), |acc, (l, r, p)| {
        let frac = ((x - l) / (r - l)).max(T::zero()).min(T::one());
        acc + p * frac
    })
}

fn signed_support<T: Real>(law: &JumpLaw<T>) -> (T, T) {
    match law {
        JumpLaw::PointMass { at } => (*at, *at),
        _ => law
            .cells()
            .into_iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), (l, r, _)| (lo.min(l), hi.max(r))),
    }
}

fn convolve<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == T::zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

/// P(|X_t| > ε) for a compound Poisson process with intensity `lambda` and
/// jump law `law`, summing the Poisson mixture up to `n_max` jumps.
///
/// One jump uses the law's exact tail. Sums of two or more jumps are
/// convolved on a grid of [`CONVOLUTION_CELLS`] cells; snapping each jump to
/// its cell centre moves S_n by at most n·h/2, so the error is at most
/// 2nh·sup g per term. The Poisson remainder P(N > n_max) is added to the
/// error. When every jump exceeds ε on one side, the tail is 1 − e^{−λt}.
pub fn cpp_exact_tail<T: Real>(lambda: T, law: &JumpLaw<T>, eps: T, t: T, n_max: usize) -> Result<ExactTail<T>> {
    check_args(eps, t)?;
    if !(lambda >= T::zero() && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda >= 0 required, got {lambda}")));
    }
    let mean = lambda * t;
    if mean == T::zero() {
        return Ok(ExactTail {
            prob: T::zero(),
            method: Method::PoissonSum,
            abs_error: T::zero(),
        });
    }
    let (lo, hi) = signed_support(law);
    let point = matches!(law, JumpLaw::PointMass { .. });
    let beyond = |edge: T| edge > eps || (!point && edge >= eps);
    if beyond(lo) || beyond(-hi) {
        let prob = -(-mean).exp_m1();
        return Ok(ExactTail {
            prob,
            method: Method::PoissonSum,
            abs_error: prob * T::epsilon() * T::lit(4.0),
        });
    }
    let n_max = n_max.max(1);
    let weight = |n: usize| ln_poisson_pmf(n, mean).exp();
    let mut prob = weight(1) * law.tail_abs(eps);
    let mut err = T::zero();
    if n_max >= 2 {
        match law {
            JumpLaw::PointMass { at } => {
                for n in 2..=n_max {
                    if (T::lit(n as f64) * *at).abs() > eps {
                        prob = prob + weight(n);
                    }
                }
            }
            _ => {
                let nf = T::lit(n_max as f64);
                let grid_lo = lo.min(nf * lo);
                let grid_hi = hi.max(nf * hi);
                let h = (grid_hi - grid_lo) / T::lit(CONVOLUTION_CELLS as f64);
                let first = ((lo - grid_lo) / h).floor().to_usize().unwrap_or(0);
                let last = (((hi - grid_lo) / h).ceil().to_usize().unwrap_or(0)).min(CONVOLUTION_CELLS);
                let masses: Vec<T> = (first..last)
                    .map(|j| {
                        let a = grid_lo + T::lit(j as f64) * h;
                        law_cdf(law, a + h) - law_cdf(law, a)
                    })
                    .collect();
                let g_sup = law.density_sup();
                let mut dist = masses.clone();
                for n in 2..=n_max {
                    dist = convolve(&dist, &masses);
                    let nf = T::lit(n as f64);
                    let offset = nf * T::lit(first as f64);
                    let tail = dist.iter().enumerate().fold(T::zero(), |acc, (k, &mass)| {
                        let x = nf * grid_lo + (offset + T::lit(k as f64) + nf / T::lit(2.0)) * h;
                        if x.abs() > eps {
                            acc + mass
                        } else {
                            acc
                        }
                    });
                    let w = weight(n);
                    prob = prob + w * tail;
                    err = err + w * T::lit(2.0) * nf * h * g_sup;
                }
            }
        }
    }
    err = err + gamma_p(T::lit((n_max + 1) as f64), mean);
    Ok(ExactTail {
        prob: clamp_prob(prob),
        method: Method::PoissonSum,
        abs_error: err,
    })
}

/// P(|t b(ε) + M_t(ε)| ≥ ε) = P(N_t ≥ 2) when all jumps below ε lie in
/// [3ε/4, ε): one such jump stays below ε, two always exceed it. The
/// argument is the intensity of those jumps.
pub fn smalljump_exact_cpp<T: Real>(lambda_below: T, eps: T, t: T) -> Result<T> {
    check_args(eps, t)?;
    if !(lambda_below >= T::zero()) {
        return Err(Error::InvalidParameter(format!("lambda_below >= 0 required, got {lambda_below}")));
    }
    let mean = lambda_below * t;
    if mean == T::zero() {
        return Ok(T::zero());
    }
    Ok(gamma_p(T::lit(2.0), mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cauchy_values() {
        assert_relative_eq!(cauchy_tail(1.0_f64, 1.0).unwrap().prob, 0.5, max_relative = 1e-15);
        assert_relative_eq!(cauchy_tail(1.0_f64, 0.1).unwrap().prob, 0.063_451_02, max_relative = 1e-6);
    }

    #[test]
    fn gamma_value_and_shape_guard() {
        let g = gamma_tail(1.0_f64, 0.1).unwrap();
        assert_relative_eq!(g.prob, 0.024_127_343_726_327_78, max_relative = 1e-12);
        assert!(matches!(gamma_tail(1.0_f64, 1.0), Err(Error::ShapeTooLarge(_))));
    }

    #[test]
    fn ig_is_normalised() {
        let p = ig_tail(1e-9_f64, 0.05).unwrap();
        assert!((p.prob - 1.0).abs() < 1e-3, "{p:?}");
    }

    #[test]
    fn cpp_one_sided_beyond_eps() {
        let law = JumpLaw::uniform(1.0_f64, 2.0).unwrap();
        let p = cpp_exact_tail(2.0, &law, 0.5, 0.1, 10).unwrap();
        assert_relative_eq!(p.prob, 1.0 - (-0.2f64).exp(), max_relative = 1e-14);
        let z = cpp_exact_tail(0.0, &law, 0.5, 0.1, 10).unwrap();
        assert_eq!(z.prob, 0.0);
    }

    #[test]
    fn cpp_point_mass_matches_poisson() {
        // jumps of 0.4 and ε = 1: need at least three jumps
        let law = JumpLaw::point_mass(0.4_f64).unwrap();
        let p = cpp_exact_tail(3.0, &law, 1.0, 0.5, 60).unwrap();
        let mean = 1.5_f64;
        let expect = 1.0 - (-mean).exp() * (1.0 + mean + mean * mean / 2.0);
        assert_relative_eq!(p.prob, expect, max_relative = 1e-12);
    }

    #[test]
    fn smalljump_sharp_case() {
        let p = smalljump_exact_cpp(1.0_f64, 0.5, 0.1).unwrap();
        assert_relative_eq!(p, 1.0 - (-0.1f64).exp() * 1.1, max_relative = 1e-12);
        assert_eq!(smalljump_exact_cpp(0.0_f64, 0.5, 0.1).unwrap(), 0.0);
    }
}
