use serde::Serialize;

use super::{LevyModel, Variation};
use crate::quadrature::{integrate_log, Estimate};
use crate::{Error, Real, Result};

const TAIL_CAP: f64 = 1e15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Quadrature,
}

/// A functional of the Lévy density with provenance and error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValue<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub source: Source,
}

impl<T: Real> FunctionalValue<T> {
    fn exact(value: T) -> Self {
        FunctionalValue {
            value,
            abs_error_estimate: T::zero(),
            source: Source::ClosedForm,
        }
    }

    fn closed(value: T) -> Self {
        FunctionalValue {
            value,
            abs_error_estimate: value.abs() * T::epsilon() * T::lit(8.0),
            source: Source::ClosedForm,
        }
    }

    fn quadrature(est: Estimate<T>) -> Self {
        FunctionalValue {
            value: est.value,
            abs_error_estimate: est.abs_error,
            source: Source::Quadrature,
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Pos,
    Neg,
}

impl Side {
    fn sign<T: Real>(self) -> T {
        match self {
            Side::Pos => T::one(),
            Side::Neg => -T::one(),
        }
    }
}

fn check_cutoff<T: Real>(a: T, what: &str) -> Result<()> {
    if a > T::zero() && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidCutoff(format!("{what} > 0 required, got {a}")))
    }
}

fn add<T: Real>(a: Estimate<T>, b: Estimate<T>) -> Estimate<T> {
    Estimate {
        value: a.value + b.value,
        abs_error: a.abs_error + b.abs_error,
    }
}

impl<T: Real> LevyModel<T> {
    /// λ_a = ∫_{|x|>a} f.
    pub fn lambda(&self, a: T) -> Result<FunctionalValue<T>> {
        check_cutoff(a, "a")?;
        match &self.closed.lambda {
            Some(f) => Ok(FunctionalValue::closed(f(a))),
            None => self.quad_lambda(a),
        }
    }

    /// λ_a by quadrature, ignoring any closed form.
    pub fn quad_lambda(&self, a: T) -> Result<FunctionalValue<T>> {
        check_cutoff(a, "a")?;
        let pos = self.side_integral(Side::Pos, 0, a, T::infinity())?;
        let neg = self.side_integral(Side::Neg, 0, a, T::infinity())?;
        Ok(FunctionalValue::quadrature(add(pos, neg)))
    }

    /// λ_{a,b} = ∫_{a<|x|<b} f, with λ_{a,a} = 0.
    pub fn lambda_band(&self, a: T, b: T) -> Result<FunctionalValue<T>> {
        check_cutoff(a, "a")?;
        if !(b >= a) {
            return Err(Error::InvalidCutoff(format!("0 < a <= b required, got a = {a}, b = {b}")));
        }
        if a == b {
            return Ok(FunctionalValue::exact(T::zero()));
        }
        if let Some(f) = &self.closed.lambda {
            let v = if b.is_finite() { f(a) - f(b) } else { f(a) };
            return Ok(FunctionalValue::closed(v.max(T::zero())));
        }
        self.quad_lambda_band(a, b)
    }

    pub fn quad_lambda_band(&self, a: T, b: T) -> Result<FunctionalValue<T>> {
        check_cutoff(a, "a")?;
        if !(b >= a) {
            return Err(Error::InvalidCutoff(format!("0 < a <= b required, got a = {a}, b = {b}")));
        }
        let pos = self.side_integral(Side::Pos, 0, a, b)?;
        let neg = self.side_integral(Side::Neg, 0, a, b)?;
        Ok(FunctionalValue::quadrature(add(pos, neg)))
    }

    /// σ²(a) = ∫_{|x|<a} x² f.
    pub fn sigma2(&self, a: T) -> Result<FunctionalValue<T>> {
        check_cutoff(a, "a")?;
        match &self.closed.sigma2 {
            Some(f) => Ok(FunctionalValue::closed(f(a))),
            None => self.quad_sigma2(a),
        }
    }

    pub fn quad_sigma2(&self, a: T) -> Result<FunctionalValue<T>> {
        check_cutoff(a, "a")?;
        let pos = self.side_integral(Side::Pos, 2, T::zero(), a)?;
        let neg = self.side_integral(Side::Neg, 2, T::zero(), a)?;
        Ok(FunctionalValue::quadrature(add(pos, neg)))
    }

    /// Drift b(ε) of the decomposition at level ε: `∫_{|x|≤ε} x f` for
    /// finite variation, `−∫_{ε≤|x|≤1} x f` for infinite variation (read as
    /// `∫_{1<|x|≤ε} x f` when ε > 1). Symmetric models return exactly 0.
    pub fn drift(&self, eps: T) -> Result<FunctionalValue<T>> {
        check_cutoff(eps, "eps")?;
        if self.symmetric {
            return Ok(FunctionalValue::exact(T::zero()));
        }
        if self.variation.is_none() {
            return Err(Error::UndeclaredVariation);
        }
        match &self.closed.drift {
            Some(f) => Ok(FunctionalValue::closed(f(eps))),
            None => self.quad_drift(eps),
        }
    }

    pub fn quad_drift(&self, eps: T) -> Result<FunctionalValue<T>> {
        check_cutoff(eps, "eps")?;
        let variation = self.variation.ok_or(Error::UndeclaredVariation)?;
        let one = T::one();
        let signed = |side: Side, lo: T, hi: T| -> Result<Estimate<T>> {
            let e = self.side_integral(side, 1, lo, hi)?;
            Ok(Estimate {
                value: side.sign::<T>() * e.value,
                abs_error: e.abs_error,
            })
        };
        let total = match variation {
            Variation::Finite => add(signed(Side::Pos, T::zero(), eps)?, signed(Side::Neg, T::zero(), eps)?),
            Variation::Infinite if eps <= one => {
                let s = add(signed(Side::Pos, eps, one)?, signed(Side::Neg, eps, one)?);
                Estimate {
                    value: -s.value,
                    abs_error: s.abs_error,
                }
            }
            Variation::Infinite => add(signed(Side::Pos, one, eps)?, signed(Side::Neg, one, eps)?),
        };
        Ok(FunctionalValue::quadrature(total))
    }

    /// ∫_{a<|x|<b} x f, the compensator rate of the jumps in the band.
    pub fn band_first_moment(&self, a: T, b: T) -> Result<FunctionalValue<T>> {
        check_cutoff(a, "a")?;
        if !(b >= a) || !b.is_finite() {
            return Err(Error::InvalidCutoff(format!("0 < a <= b < inf required, got a = {a}, b = {b}")));
        }
        if self.symmetric || a == b {
            return Ok(FunctionalValue::exact(T::zero()));
        }
        let pos = self.side_integral(Side::Pos, 1, a, b)?;
        let neg = self.side_integral(Side::Neg, 1, a, b)?;
        Ok(FunctionalValue::quadrature(Estimate {
            value: pos.value - neg.value,
            abs_error: pos.abs_error + neg.abs_error,
        }))
    }

    /// ∫_lo^hi x^power f(±x) dx on one half-line. `lo = 0` is handled with
    /// the class bound on the neglected piece, `hi = ∞` with the tail envelope.
    fn side_integral(&self, side: Side, power: i32, lo: T, hi: T) -> Result<Estimate<T>> {
        let extent = match side {
            Side::Pos => self.extent_pos,
            Side::Neg => self.extent_neg,
        };
        let hi = hi.min(extent);
        if !(hi > lo) {
            return Ok(Estimate::zero());
        }
        let tol = &self.tol;
        let target = tol.abs * T::lit(0.01);
        let mut remainder = T::zero();

        let mut lo = lo;
        if lo == T::zero() {
            let p = T::lit(power as f64) - self.class_alpha;
            if p <= T::zero() {
                return Err(Error::QuadratureFailure {
                    requested: tol.abs.as_f64(),
                    achieved: f64::INFINITY,
                });
            }
            // ∫_0^δ x^power M x^{−1−α} = M δ^p / p
            let m = self.class_m;
            // for α near 2 the target cutoff is so small that f overflows there;
            // stop where the class bound keeps f below 1e300 and carry the rest
            let finite_floor = (m / T::lit(1e300)).powf((T::one() + self.class_alpha).recip());
            let delta = (target * p / m).powf(p.recip()).max(finite_floor).min(T::lit(2.0));
            if delta >= hi {
                return Ok(Estimate {
                    value: T::zero(),
                    abs_error: m * hi.min(T::lit(2.0)).powf(p) / p,
                });
            }
            remainder = remainder + m * delta.powf(p) / p;
            lo = delta;
        }

        let mut upper = hi;
        if !hi.is_finite() {
            if power != 0 {
                return Err(Error::InvalidParameter(
                    "moment integrals need a finite upper limit".into(),
                ));
            }
            let env = self.envelope().ok_or_else(|| {
                Error::NonIntegrableTail(
                    "unbounded support needs global_M or an integrable tail envelope".into(),
                )
            })?;
            let cut = env
                .cutoff(target)
                .filter(|x| x.as_f64() <= TAIL_CAP)
                .ok_or_else(|| {
                    Error::NonIntegrableTail("tail envelope remainder does not fall below tolerance".into())
                })?;
            upper = cut.max(lo);
            remainder = remainder + env.remainder(upper);
        }

        let sign = side.sign::<T>();
        let density = &self.density;
        let est = integrate_log(
            |x: T| x.powi(power) * density(sign * x),
            lo,
            upper,
            &self.breakpoints,
            tol,
        )?;
        Ok(Estimate {
            value: est.value,
            abs_error: est.abs_error + remainder,
        })
    }
}
