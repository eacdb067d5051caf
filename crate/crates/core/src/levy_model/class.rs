use serde::Serialize;

use super::{LevyModel, Variation};
use crate::{Error, Real, Result};

/// Upper bounds implied by membership in 𝓛_{M,α} at a level `x ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassBounds<T> {
    pub alpha: T,
    /// σ²(x)/x² ≤ 2M x^{−α}/(2−α)
    pub sigma2_over_x2: T,
    /// λ_{x,y} ≤ 2M x^{−α}/α for x ≤ y ≤ 2
    pub lambda: T,
    /// |b(x)| ≤ 2M x^{1−α}/(1−α), only for α < 1
    pub drift: Option<T>,
}

impl<T: Real> ClassBounds<T> {
    pub fn drift(&self) -> Result<T> {
        self.drift
            .ok_or_else(|| Error::alpha(self.alpha.as_f64(), "the drift bound needs alpha < 1"))
    }
}

pub fn class_functional_bounds<T: Real>(m: T, alpha: T, x: T) -> Result<ClassBounds<T>> {
    let two = T::lit(2.0);
    if !(m > T::zero()) {
        return Err(Error::InvalidParameter(format!("M > 0 required, got {m}")));
    }
    if !(alpha > T::zero() && alpha < two) {
        return Err(Error::alpha(alpha.as_f64(), "alpha must lie in (0, 2)"));
    }
    if !(x > T::zero() && x <= two) {
        return Err(Error::InvalidCutoff(format!("0 < x <= 2 required, got {x}")));
    }
    let xa = x.powf(-alpha);
    Ok(ClassBounds {
        alpha,
        sigma2_over_x2: two * m * xa / (two - alpha),
        lambda: two * m * xa / alpha,
        drift: (alpha < T::one()).then(|| two * m * x * xa / (T::one() - alpha)),
    })
}

/// Outcome of one certificate check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Point where the check came closest to (or went past) failing.
    pub worst_x: f64,
    /// Ratio of the observed quantity to its allowance at `worst_x`.
    pub worst_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub passed: bool,
    pub checks: Vec<ClassCheck>,
}

impl ClassReport {
    pub fn failures(&self) -> impl Iterator<Item = &ClassCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const SLACK: f64 = 1e-9;

fn log_grid<T: Real>(lo: T, hi: T, n: usize, extra: &[T]) -> Vec<T> {
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / T::lit((n - 1) as f64);
    let mut grid: Vec<T> = (0..n).map(|i| (a + step * T::lit(i as f64)).exp()).collect();
    let nudge = T::lit(1e-9);
    for &p in extra {
        for q in [p * (T::one() - nudge), p, p * (T::one() + nudge)] {
            if q >= lo && q <= hi {
                grid.push(q);
            }
        }
    }
    grid.sort_by(|x, y| x.partial_cmp(y).expect("finite grid"));
    grid
}

fn worst<T: Real>(grid: &[T], ratio: impl Fn(T) -> T) -> (T, T) {
    grid.iter().fold((grid[0], T::neg_infinity()), |(wx, wr), &x| {
        let r = ratio(x);
        if r > wr || r.is_nan() {
            (x, r)
        } else {
            (wx, wr)
        }
    })
}

fn check(name: &'static str, (x, r): (impl Real, impl Real)) -> ClassCheck {
    let r = r.as_f64();
    ClassCheck {
        name,
        passed: r <= 1.0 + SLACK,
        worst_x: x.as_f64(),
        worst_ratio: r,
    }
}

/// Evaluates the model's declared certificates on log-spaced grids.
///
/// Checks `f(x)|x|^{1+α} ≤ M` on `|x| ∈ [10⁻⁶, 2]`, `f ≤ global_M` and the
/// tail envelope on `[1, X_max]`, symmetry, and for finite variation that
/// `∫_{δ<|x|≤1}|x|f` stabilizes as δ shrinks.
pub fn verify_class_membership<T: Real>(model: &LevyModel<T>, grid_size: usize) -> ClassReport {
    let n = grid_size.max(2);
    let alpha = model.class_alpha();
    let m = model.class_m();
    let f = |x: T| model.density(x);
    let both = |x: T| f(x).max(f(-x));
    let mut checks = Vec::new();

    let near = log_grid(T::lit(1e-6), T::lit(2.0), n, model.breakpoints());
    checks.push(check(
        "class_M_alpha",
        worst(&near, |x| both(x) * x.powf(T::one() + alpha) / m),
    ));

    let x_max = model
        .envelope()
        .and_then(|env| env.cutoff(T::lit(1e-12)))
        .unwrap_or(T::lit(1e3))
        .min(T::lit(1e6))
        .max(T::lit(2.0));
    let far = log_grid(T::one(), x_max, n, model.breakpoints());
    if let Some(g) = model.global_m() {
        checks.push(check("global_M", worst(&far, |x| both(x) / g)));
    }
    if let Some(env) = model.envelope() {
        let from = env.from();
        let pts: Vec<T> = log_grid(from, x_max.max(from * T::lit(2.0)), n, model.breakpoints());
        checks.push(check("tail_envelope", worst(&pts, |x| both(x) / env.value(x))));
    }

    if model.symmetric() {
        let sym = log_grid(T::lit(1e-6), x_max, n, model.breakpoints());
        checks.push(check(
            "symmetry",
            worst(&sym, |x| {
                let (a, b) = (f(x), f(-x));
                let scale = a.abs().max(b.abs());
                if scale == T::zero() {
                    T::zero()
                } else {
                    (a - b).abs() / (scale * T::lit(1e-12))
                }
            }),
        ));
    }

    if model.variation() == Some(Variation::Finite) {
        checks.push(finite_variation_check(model));
    }

    ClassReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

// Per-decade increments of ∫_{10^{-k}<|x|≤1}|x|f must shrink geometrically.
fn finite_variation_check<T: Real>(model: &LevyModel<T>) -> ClassCheck {
    let tol = crate::quadrature::Tolerance::default();
    let g = |x: T| x * (model.density(x) + model.density(-x));
    let decade = |k: i32| {
        let hi = T::lit(10f64.powi(-k));
        let lo = hi * T::lit(0.1);
        crate::quadrature::integrate_log(&g, lo, hi, model.breakpoints(), &tol)
            .map(|e| e.value)
            .unwrap_or(T::infinity())
    };
    let increments: Vec<T> = (0..8).map(decade).collect();
    let floor = T::lit(1e-13);
    let (last, prev) = (increments[7], increments[6]);
    let ratio = if last <= floor {
        T::zero()
    } else if prev <= T::zero() {
        T::infinity()
    } else {
        last / prev
    };
    ClassCheck {
        name: "finite_variation",
        passed: ratio.as_f64() < 0.99,
        worst_x: 1e-8,
        worst_ratio: ratio.as_f64() / 0.99,
    }
}
