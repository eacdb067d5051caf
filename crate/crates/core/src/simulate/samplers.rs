//! Samplers for X_t and M_t(ε).
//!
//! The Cauchy, Gamma, inverse Gaussian and stable builtins have exact
//! marginal laws. Every other model is composed from its jumps: those above
//! the inner cutoff δ are drawn by thinning a Poisson stream from a piecewise
//! envelope of the density (M|x|^{−1−α} up to |x| = 2, then the global bound
//! and the tail envelope), so their law does not depend on any quadrature.
//! Compound Poisson models are sampled from their jump law directly.

use std::f64::consts::PI;

use rand::distr::Open01;
use rand::Rng as _;
use rand_distr::{Distribution, Exp1, Gamma, InverseGaussian, Poisson, StandardNormal};

use super::{Rng, SmallJumpScheme};
use crate::levy_model::{JumpLaw, ModelKind, TailEnvelope};
use crate::special::gamma;
use crate::{Error, Model, Result};

fn poisson(mean: f64) -> Result<Option<Poisson<f64>>> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(Error::InvalidParameter(format!("Poisson mean must be finite and >= 0, got {mean}")));
    }
    if mean == 0.0 {
        return Ok(None);
    }
    Poisson::new(mean)
        .map(Some)
        .map_err(|e| Error::InvalidParameter(format!("Poisson mean {mean}: {e}")))
}

fn count(dist: &Option<Poisson<f64>>, rng: &mut Rng) -> u64 {
    dist.as_ref().map_or(0, |d| d.sample(rng) as u64)
}

/// Sum of N ~ Poisson(intensity·t) draws of `jump`.
///
/// # Panics
/// If `intensity` is negative or `t` is not positive.
pub fn sample_compound_poisson<J>(intensity: f64, mut jump: J, t: f64, rng: &mut Rng) -> f64
where
    J: FnMut(&mut Rng) -> f64,
{
    assert!(intensity >= 0.0 && t > 0.0, "intensity >= 0 and t > 0 required");
    let dist = poisson(intensity * t).expect("finite Poisson mean");
    let n = count(&dist, rng);
    (0..n).map(|_| jump(rng)).sum()
}

/// σ with X_1 = σS for the symmetric stable density `scale·|x|^{−1−α}`,
/// S having characteristic function e^{−|u|^α}.
pub fn stable_scale(alpha: f64, scale: f64) -> f64 {
    if alpha == 1.0 {
        return scale * PI;
    }
    // 2·scale·Γ(1−α)cos(πα/2)/α, with Γ(1−α) = Γ(2−α)/(1−α)
    let pow = 2.0 * scale * gamma(2.0 - alpha) * (PI * alpha / 2.0).cos() / (alpha * (1.0 - alpha));
    pow.powf(alpha.recip())
}

/// Chambers–Mallows–Stuck draw of a standard symmetric α-stable variable.
fn cms_symmetric(alpha: f64, rng: &mut Rng) -> f64 {
    let u: f64 = rng.sample(Open01);
    let v = PI * (u - 0.5);
    if alpha == 1.0 {
        return v.tan();
    }
    let w: f64 = Exp1.sample(rng);
    (alpha * v).sin() / v.cos().powf(alpha.recip()) * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

#[derive(Debug, Clone)]
enum ExactLaw {
    Cauchy { t: f64 },
    Gamma(Gamma<f64>),
    InverseGaussian(InverseGaussian<f64>),
    Stable { alpha: f64, scale: f64 },
}

impl ExactLaw {
    fn for_model(model: &Model, t: f64) -> Result<Option<Self>> {
        let err = |e: String| Error::InvalidParameter(e);
        Ok(Some(match *model.kind() {
            ModelKind::Cauchy => ExactLaw::Cauchy { t },
            ModelKind::Gamma => ExactLaw::Gamma(Gamma::new(t, 1.0).map_err(|e| err(e.to_string()))?),
            ModelKind::InverseGaussian => {
                let mean = PI.sqrt() * t;
                let shape = 2.0 * PI * t * t;
                ExactLaw::InverseGaussian(InverseGaussian::new(mean, shape).map_err(|e| err(e.to_string()))?)
            }
            ModelKind::Stable { alpha, scale } => ExactLaw::Stable {
                alpha,
                scale: stable_scale(alpha, scale) * t.powf(alpha.recip()),
            },
            _ => return Ok(None),
        }))
    }

    fn sample(&self, rng: &mut Rng) -> f64 {
        match self {
            ExactLaw::Cauchy { t } => {
                let u: f64 = rng.sample(Open01);
                t * (PI * (u - 0.5)).tan()
            }
            ExactLaw::Gamma(g) => g.sample(rng),
            ExactLaw::InverseGaussian(ig) => ig.sample(rng),
            ExactLaw::Stable { alpha, scale } => scale * cms_symmetric(*alpha, rng),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    /// coef·x^{−exponent}, exponent > 1
    Power { coef: f64, exponent: f64 },
    Flat { height: f64 },
    /// coef·e^{−rate·x}
    Exp { coef: f64, rate: f64 },
}

/// One piece of the envelope on lo < |x| < hi, on one side of the origin.
#[derive(Debug, Clone, Copy)]
struct Piece {
    sign: f64,
    lo: f64,
    hi: f64,
    shape: Shape,
    mass: f64,
}

impl Piece {
    fn new(sign: f64, lo: f64, hi: f64, shape: Shape) -> Result<Self> {
        let mass = match shape {
            Shape::Power { coef, exponent } => {
                let p = exponent - 1.0;
                coef * (lo.powf(-p) - if hi.is_finite() { hi.powf(-p) } else { 0.0 }) / p
            }
            Shape::Flat { height } => height * (hi - lo),
            Shape::Exp { coef, rate } => coef / rate * (-rate * lo).exp() * -(-rate * (hi - lo)).exp_m1(),
        };
        if !mass.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "jump envelope has infinite mass on ({lo}, {hi})"
            )));
        }
        Ok(Piece {
            sign,
            lo,
            hi,
            shape,
            mass,
        })
    }

    fn envelope(&self, x: f64) -> f64 {
        match self.shape {
            Shape::Power { coef, exponent } => coef * x.powf(-exponent),
            Shape::Flat { height } => height,
            Shape::Exp { coef, rate } => coef * (-rate * x).exp(),
        }
    }

    /// Inverse-CDF draw from the normalised envelope.
    fn draw(&self, u: f64) -> f64 {
        let x = match self.shape {
            Shape::Power { exponent, .. } => {
                let p = 1.0 - exponent;
                let a = self.lo.powf(p);
                let b = if self.hi.is_finite() { self.hi.powf(p) } else { 0.0 };
                (a - u * (a - b)).powf(p.recip())
            }
            Shape::Flat { .. } => self.lo + u * (self.hi - self.lo),
            Shape::Exp { rate, .. } => {
                let width = -(-rate * (self.hi - self.lo)).exp_m1();
                self.lo - (-u * width).ln_1p() / rate
            }
        };
        x.clamp(self.lo, self.hi)
    }
}

/// Pieces covering lo < x < hi on one side whose density extent is `extent`.
fn side_pieces(model: &Model, sign: f64, lo: f64, hi: f64, extent: f64) -> Result<Vec<Piece>> {
    let top = hi.min(extent);
    let mut pieces = Vec::new();
    if top <= lo {
        return Ok(pieces);
    }
    let two = 2.0;
    let near_top = top.min(two);
    if lo < near_top {
        let shape = Shape::Power {
            coef: model.class_m(),
            exponent: 1.0 + model.class_alpha(),
        };
        pieces.push(Piece::new(sign, lo, near_top, shape)?);
    }
    if top <= two {
        return Ok(pieces);
    }
    let start = lo.max(two);
    let global = model.global_m().ok_or_else(|| {
        Error::InvalidParameter("sampling jumps beyond |x| = 2 needs a global bound M".into())
    })?;
    if top.is_finite() {
        pieces.push(Piece::new(sign, start, top, Shape::Flat { height: global })?);
        return Ok(pieces);
    }
    let env = model.envelope().ok_or_else(|| {
        Error::InvalidParameter("sampling an unbounded support needs a tail envelope".into())
    })?;
    let from = start.max(env.from());
    if from > start {
        pieces.push(Piece::new(sign, start, from, Shape::Flat { height: global })?);
    }
    let shape = match env {
        TailEnvelope::Exponential { coef, rate, .. } => Shape::Exp { coef, rate },
        TailEnvelope::Power { coef, exponent, .. } => Shape::Power { coef, exponent },
    };
    pieces.push(Piece::new(sign, from, f64::INFINITY, shape)?);
    Ok(pieces)
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

fn pick(cum: &[f64], rng: &mut Rng) -> usize {
    let total = *cum.last().expect("non-empty");
    let u = rng.random::<f64>() * total;
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

/// Poisson stream of the jumps with lo < |y| ≤ hi over a time t.
#[derive(Debug, Clone)]
enum JumpSource {
    Law {
        law: JumpLaw<f64>,
        cells: Vec<(f64, f64, f64)>,
        cum: Vec<f64>,
        lo: f64,
        hi: f64,
        arrivals: Option<Poisson<f64>>,
    },
    Thinned {
        model: Model,
        pieces: Vec<Piece>,
        cum: Vec<f64>,
        lo: f64,
        hi: f64,
        arrivals: Option<Poisson<f64>>,
    },
}

impl JumpSource {
    fn new(model: &Model, lo: f64, hi: f64, t: f64) -> Result<Self> {
        if let ModelKind::CompoundPoisson { lambda, ref law } = *model.kind() {
            let cells = law.cells();
            let cum = cumulative(cells.iter().map(|c| c.2));
            return Ok(JumpSource::Law {
                law: law.clone(),
                cells,
                cum,
                lo,
                hi,
                arrivals: poisson(lambda * t)?,
            });
        }
        let (neg, pos) = model.extents();
        let mut pieces = side_pieces(model, 1.0, lo, hi, pos)?;
        pieces.extend(side_pieces(model, -1.0, lo, hi, neg)?);
        let cum = cumulative(pieces.iter().map(|p| p.mass));
        let total = cum.last().copied().unwrap_or(0.0);
        Ok(JumpSource::Thinned {
            model: model.clone(),
            pieces,
            cum,
            lo,
            hi,
            arrivals: poisson(total * t)?,
        })
    }

    fn sum(&self, rng: &mut Rng) -> f64 {
        match self {
            JumpSource::Law {
                law,
                cells,
                cum,
                lo,
                hi,
                arrivals,
            } => {
                let mut total = 0.0;
                for _ in 0..count(arrivals, rng) {
                    let y = match law {
                        JumpLaw::PointMass { at } => *at,
                        _ => {
                            let (l, r, _) = cells[pick(cum, rng)];
                            l + rng.random::<f64>() * (r - l)
                        }
                    };
                    if y.abs() > *lo && y.abs() <= *hi {
                        total += y;
                    }
                }
                total
            }
            JumpSource::Thinned {
                model,
                pieces,
                cum,
                lo,
                hi,
                arrivals,
            } => {
                let mut total = 0.0;
                for _ in 0..count(arrivals, rng) {
                    let piece = &pieces[pick(cum, rng)];
                    let x = piece.draw(rng.random());
                    let y = piece.sign * x;
                    let accept = rng.random::<f64>() * piece.envelope(x) < model.density(y);
                    if accept && x > *lo && x <= *hi {
                        total += y;
                    }
                }
                total
            }
        }
    }

    /// Whether every jump of the process is simulated, so that nothing below
    /// the inner cutoff is discarded.
    fn is_complete(&self) -> bool {
        matches!(self, JumpSource::Law { lo, .. } if *lo == 0.0)
    }
}

fn gaussian(sd: f64, rng: &mut Rng) -> f64 {
    if sd == 0.0 {
        return 0.0;
    }
    let z: f64 = StandardNormal.sample(rng);
    sd * z
}

/// Draws of X_t for one model and time.
#[derive(Debug, Clone)]
pub struct IncrementSampler {
    inner: Increment,
}

#[derive(Debug, Clone)]
enum Increment {
    Exact(ExactLaw),
    Composed { drift: f64, jumps: JumpSource, gauss_sd: f64 },
}

impl IncrementSampler {
    /// Exact sampler when the model has one, otherwise t b(δ) + the jumps
    /// beyond δ (+ a Gaussian for the rest under refinement). Compound
    /// Poisson models are always exact.
    pub fn new(model: &Model, t: f64, scheme: Option<&SmallJumpScheme>) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t > 0 required, got {t}")));
        }
        if let Some(exact) = ExactLaw::for_model(model, t)? {
            return Ok(IncrementSampler {
                inner: Increment::Exact(exact),
            });
        }
        if let ModelKind::CompoundPoisson { .. } = model.kind() {
            return Ok(IncrementSampler {
                inner: Increment::Composed {
                    drift: 0.0,
                    jumps: JumpSource::new(model, 0.0, f64::INFINITY, t)?,
                    gauss_sd: 0.0,
                },
            });
        }
        let scheme = scheme.ok_or_else(|| {
            Error::SchemeInfeasible(format!("{} has no exact sampler; a small-jump scheme is required", model.name()))
        })?;
        let delta = scheme.inner_cutoff;
        let gauss_sd = if scheme.gaussian_refinement {
            (t * scheme.inner_sigma2).sqrt()
        } else {
            0.0
        };
        Ok(IncrementSampler {
            inner: Increment::Composed {
                drift: t * model.drift(delta)?.value,
                jumps: JumpSource::new(model, delta, f64::INFINITY, t)?,
                gauss_sd,
            },
        })
    }

    pub fn is_exact(&self) -> bool {
        match &self.inner {
            Increment::Exact(_) => true,
            Increment::Composed { jumps, .. } => jumps.is_complete(),
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match &self.inner {
            Increment::Exact(law) => law.sample(rng),
            Increment::Composed { drift, jumps, gauss_sd } => drift + jumps.sum(rng) + gaussian(*gauss_sd, rng),
        }
    }
}

/// Draws of M_t(ε) under a [`SmallJumpScheme`]: the jumps in (δ, ε] minus
/// their compensator t(b(ε) − b(δ)), plus a Gaussian of variance tσ²(δ)
/// under refinement. Compound Poisson models simulate every jump up to ε.
#[derive(Debug, Clone)]
pub struct SmallJumpSampler {
    jumps: JumpSource,
    compensator: f64,
    gauss_sd: f64,
}

impl SmallJumpSampler {
    pub fn new(model: &Model, eps: f64, scheme: &SmallJumpScheme, t: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidCutoff(format!("eps must lie in (0, 1], got {eps}")));
        }
        let delta = scheme.inner_cutoff;
        if !(delta < eps) {
            return Err(Error::InvalidCutoff(format!("inner cutoff {delta} must be below eps = {eps}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t > 0 required, got {t}")));
        }
        if let ModelKind::CompoundPoisson { .. } = model.kind() {
            return Ok(SmallJumpSampler {
                jumps: JumpSource::new(model, 0.0, eps, t)?,
                compensator: t * model.drift(eps)?.value,
                gauss_sd: 0.0,
            });
        }
        let gauss_sd = if scheme.gaussian_refinement {
            (t * scheme.inner_sigma2).sqrt()
        } else {
            0.0
        };
        Ok(SmallJumpSampler {
            jumps: JumpSource::new(model, delta, eps, t)?,
            compensator: t * model.band_first_moment(delta, eps)?.value,
            gauss_sd,
        })
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        self.jumps.sum(rng) - self.compensator + gaussian(self.gauss_sd, rng)
    }
}

/// One draw of M_t(ε). Builds the sampler on every call; use
/// [`SmallJumpSampler`] for repeated draws.
pub fn sample_small_jumps(model: &Model, eps: f64, scheme: &SmallJumpScheme, t: f64, rng: &mut Rng) -> Result<f64> {
    Ok(SmallJumpSampler::new(model, eps, scheme, t)?.sample(rng))
}

/// One draw of X_t. Builds the sampler on every call; use
/// [`IncrementSampler`] for repeated draws.
pub fn sample_increment(model: &Model, t: f64, rng: &mut Rng, scheme: Option<&SmallJumpScheme>) -> Result<f64> {
    Ok(IncrementSampler::new(model, t, scheme)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::SeededStream;
    use approx::assert_relative_eq;

    #[test]
    fn stable_scale_matches_cauchy() {
        assert_relative_eq!(stable_scale(1.0, 1.0 / PI), 1.0, max_relative = 1e-15);
        // continuity across α = 1
        assert_relative_eq!(stable_scale(1.0 + 1e-7, 1.0), stable_scale(1.0, 1.0), max_relative = 1e-5);
        assert_relative_eq!(stable_scale(1.0 - 1e-7, 1.0), stable_scale(1.0, 1.0), max_relative = 1e-5);
    }

    #[test]
    fn power_piece_draws_stay_in_range() {
        let p = Piece::new(1.0, 0.01, 2.0, Shape::Power { coef: 1.0, exponent: 1.5 }).unwrap();
        for u in [0.0, 0.3, 0.999_999] {
            let x = p.draw(u);
            assert!((0.01..=2.0).contains(&x));
        }
        assert_relative_eq!(p.draw(0.0), 0.01, max_relative = 1e-12);
        let e = Piece::new(1.0, 2.0, f64::INFINITY, Shape::Exp { coef: 1.0, rate: 1.0 }).unwrap();
        assert_relative_eq!(e.mass, (-2.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(e.draw(1.0 - (-1.0f64).exp()), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn compound_poisson_zero_intensity() {
        let mut rng = SeededStream::new(1, 0).rng(0);
        assert_eq!(sample_compound_poisson(0.0, |_| 1.0, 1.0, &mut rng), 0.0);
    }
}
