//! Globally adaptive Gauss–Legendre quadrature.
//!
//! Each panel carries a 15-point rule on its two halves; the difference
//! with the rule on the whole panel is the (pessimistic) error estimate.
//! The panel with the largest estimate is bisected until the summed
//! estimate meets `max(rel·|I|, abs)`.

use std::sync::OnceLock;

use crate::{Error, Real, Result};

const ORDER: usize = 15;

/// Accuracy target for one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
    pub max_panels: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        let floor = T::epsilon() * T::lit(100.0);
        Tolerance {
            rel: T::lit(1e-10).max(floor),
            abs: T::lit(1e-12),
            max_panels: 4_000,
        }
    }
}

impl<T: Real> Tolerance<T> {
    /// Target absolute error for an integral of magnitude `value`.
    pub fn target(&self, value: T) -> T {
        (self.rel * value.abs()).max(self.abs)
    }
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub abs_error: T,
}

impl<T: Real> Estimate<T> {
    pub fn zero() -> Self {
        Estimate {
            value: T::zero(),
            abs_error: T::zero(),
        }
    }
}

fn legendre_rule() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        let n = ORDER as f64;
        for i in 0..ORDER {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=ORDER {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                deriv = n * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / deriv;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * deriv * deriv);
        }
        (nodes, weights)
    })
}

fn rule<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> T {
    let (nodes, weights) = legendre_rule();
    let half = T::lit(0.5) * (b - a);
    let mid = T::lit(0.5) * (a + b);
    half * nodes
        .iter()
        .zip(weights.iter())
        .fold(T::zero(), |acc, (&x, &w)| acc + T::lit(w) * f(mid + half * T::lit(x)))
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn panel<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, coarse: T) -> Panel<T> {
    let m = T::lit(0.5) * (a + b);
    let value = rule(f, a, m) + rule(f, m, b);
    Panel {
        a,
        b,
        value,
        error: (value - coarse).abs(),
    }
}

/// ∫_a^b f over a finite interval.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: &Tolerance<T>) -> Result<Estimate<T>> {
    integrate_pieces(f, &[a, b], tol)
}

/// ∫ f over the consecutive intervals of `points` (sorted, finite), with
/// one global error budget.
pub fn integrate_pieces<T: Real, F: Fn(T) -> T>(
    f: F,
    points: &[T],
    tol: &Tolerance<T>,
) -> Result<Estimate<T>> {
    let mut panels: Vec<Panel<T>> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| panel(&f, w[0], w[1], rule(&f, w[0], w[1])))
        .collect();
    if panels.is_empty() {
        return Ok(Estimate::zero());
    }
    loop {
        let value = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let error = panels.iter().fold(T::zero(), |s, p| s + p.error);
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureFailure {
                requested: tol.target(value).as_f64(),
                achieved: f64::INFINITY,
            });
        }
        if error <= tol.target(value) {
            return Ok(Estimate {
                value,
                abs_error: error,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .fold(0, |best, (i, p)| if p.error > panels[best].error { i } else { best });
        let Panel { a, b, .. } = panels[worst];
        let m = T::lit(0.5) * (a + b);
        if panels.len() >= tol.max_panels || !(m > a && m < b) {
            return Err(Error::QuadratureFailure {
                requested: tol.target(value).as_f64(),
                achieved: error.as_f64(),
            });
        }
        let left = panel(&f, a, m, rule(&f, a, m));
        let right = panel(&f, m, b, rule(&f, m, b));
        panels[worst] = left;
        panels.push(right);
    }
}

/// ∫_lo^hi g(x) dx for 0 < lo < hi < ∞ in the coordinate u = ln x, which
/// regularizes power-law behaviour at both ends. `breaks` are interior
/// discontinuities in x.
pub fn integrate_log<T: Real, F: Fn(T) -> T>(
    g: F,
    lo: T,
    hi: T,
    breaks: &[T],
    tol: &Tolerance<T>,
) -> Result<Estimate<T>> {
    if !(hi > lo) {
        return Ok(Estimate::zero());
    }
    let mut points = vec![lo.ln()];
    let mut inner: Vec<T> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    inner.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    points.extend(inner.into_iter().map(|x| x.ln()));
    points.push(hi.ln());
    integrate_pieces(
        |u: T| {
            let x = u.exp();
            g(x) * x
        },
        &points,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(7) - 3.0 * x, 0.0, 2.0, &Tolerance::default()).unwrap();
        assert_relative_eq!(r.value, 32.0 - 6.0, max_relative = 1e-14);
    }

    #[test]
    fn log_coordinates_handle_endpoint_singularity() {
        // ∫_{1e-12}^1 x^{-1/2} dx = 2(1 − 1e-6)
        let r = integrate_log(|x: f64| x.powf(-0.5), 1e-12, 1.0, &[], &Tolerance::default()).unwrap();
        assert_relative_eq!(r.value, 2.0 * (1.0 - 1e-6), max_relative = 1e-12);
    }

    #[test]
    fn breakpoints_split_discontinuities() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let r = integrate_log(step, 0.1, 1.0, &[0.3], &Tolerance::default()).unwrap();
        assert_relative_eq!(r.value, 0.2 + 1.4, max_relative = 1e-13);
    }

    #[test]
    fn works_in_single_precision() {
        let r = integrate(|x: f32| x.exp(), 0.0, 1.0, &Tolerance::default()).unwrap();
        assert!((r.value - (std::f32::consts::E - 1.0)).abs() < 1e-5);
    }
}
