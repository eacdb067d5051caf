//! Residual curves |P(|X_t| > ε) − λ_ε t| over t-grids, log-log rate fits,
//! and checks that the bounds dominate the truth.
//!
//! The truth comes from a closed form when the model has one, or from Monte
//! Carlo. Monte Carlo points carry their confidence interval, widened by the
//! certified bias of the small-jump scheme when one is used.

mod report;
mod truth;
mod validate;

use serde::Serialize;

use crate::bounds::auto_select;
use crate::levy_model::discontinuous;
use crate::{Bound, Error, Model, Result};

pub use report::{curve_csv, fmt_num, validation_csv};
pub use truth::{closed_form_tail, McTruth, SchemeChoice, Truth, TruthPoint};
pub use validate::{validate_bounds, RowStatus, ValidateConfig, ValidationReport, ValidationRow};

/// Residuals at or below this are treated as numerically zero by [`fit_rate`].
pub const RESIDUAL_FLOOR: f64 = 1e-14;

/// `points` log-spaced values from `lo` to `hi`, both included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || points == 0 || (points == 1 && hi != lo) {
        return Err(Error::InvalidParameter(format!(
            "log grid needs 0 < lo <= hi and enough points, got {lo}:{hi}:{points}"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi / lo).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i + 1 == points { hi } else { lo * (step * i as f64).exp() })
        .collect())
}

/// The default grid: 12 points per decade on [lo, hi].
pub fn default_grid(lo: f64, hi: f64) -> Result<Vec<f64>> {
    let decades = (hi / lo).log10();
    log_grid(lo, hi, ((12.0 * decades).round() as usize + 1).max(3))
}

/// One grid point of a residual curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub truth: f64,
    /// Confidence interval of the truth (Monte Carlo only).
    pub truth_ci: Option<(f64, f64)>,
    /// Half-width of the sampling interval alone (Monte Carlo only).
    pub sampling_half_width: Option<f64>,
    pub residual: f64,
    /// Interval for the residual implied by `truth_ci` or the numerical error.
    pub residual_ci: (f64, f64),
    /// The smallest valid bound at this point, if any.
    pub bound: Option<Bound>,
}

/// Residuals of one model at one ε.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualCurve {
    pub model: String,
    pub eps: f64,
    pub lambda_eps: f64,
    pub points: Vec<CurvePoint>,
}

/// Interval of |p − c| for p in [lo, hi].
fn distance_interval(lo: f64, hi: f64, centre: f64) -> (f64, f64) {
    let far = (lo - centre).abs().max((hi - centre).abs());
    if lo <= centre && centre <= hi {
        (0.0, far)
    } else {
        ((lo - centre).abs().min((hi - centre).abs()), far)
    }
}

/// Residual curve of `model` at `eps` over an increasing `t_grid`.
pub fn residual_curve(model: &Model, eps: f64, t_grid: &[f64], truth: &Truth) -> Result<ResidualCurve> {
    residual_curve_with_id(model, eps, t_grid, truth, 0)
}

/// [`residual_curve`] drawing Monte Carlo streams from family `curve_id`.
pub fn residual_curve_with_id(
    model: &Model,
    eps: f64,
    t_grid: &[f64],
    truth: &Truth,
    curve_id: u32,
) -> Result<ResidualCurve> {
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter("t-grid must be non-empty and positive".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("t-grid must be strictly increasing".into()));
    }
    let lam = model.lambda(eps)?;
    let points = t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let stream_id = (u64::from(curve_id) << 32) | i as u64;
            let tp = truth::increment_truth(model, eps, t, truth, stream_id)?;
            let centre = lam.value * t;
            let slack = lam.abs_error_estimate * t;
            let residual = (tp.value - centre).abs();
            let residual_ci = match tp.ci {
                Some((lo, hi)) => {
                    let (a, b) = distance_interval(lo, hi, centre);
                    ((a - slack).max(0.0), b + slack)
                }
                None => ((residual - tp.abs_error - slack).max(0.0), residual + tp.abs_error + slack),
            };
            let bound = auto_select(model, eps, t).ok().filter(|b| b.valid);
            Ok(CurvePoint {
                t,
                truth: tp.value,
                truth_ci: tp.ci,
                sampling_half_width: tp.estimate.map(|e| e.sampling_half_width()),
                residual,
                residual_ci,
                bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualCurve {
        model: model.name().to_string(),
        eps,
        lambda_eps: lam.value,
        points,
    })
}

/// Least-squares fit of ln(residual) against ln(t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub t_range: (f64, f64),
    pub points_used: usize,
}

/// Fits a line through `(ln t, ln r)` for the given points.
pub fn fit_points(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            got: points.len(),
            needed: 3,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("rate fit needs at least two distinct t".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) };
    let t_lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let t_hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(RateFit {
        slope,
        intercept,
        r2,
        t_range: (t_lo, t_hi),
        points_used: points.len(),
    })
}

/// Fits the rate of a residual curve over the points above the numerical
/// floor and, for Monte Carlo truth, above three sampling half-widths.
pub fn fit_rate(curve: &ResidualCurve) -> Result<RateFit> {
    let usable: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.residual > RESIDUAL_FLOOR)
        .filter(|p| p.sampling_half_width.is_none_or(|hw| p.residual > 3.0 * hw))
        .map(|p| (p.t, p.residual))
        .collect();
    fit_points(&usable)
}

/// The symmetric model `stable_M|x|^{−1−α}1_{|x|≤2} + bump·1_{ε≤|x|≤ε+1}`,
/// whose density jumps at |x| = ε and which carries no Lipschitz certificate.
pub fn discontinuous_example(alpha: f64, eps: f64, stable_m: f64, bump_height: f64) -> Result<Model> {
    discontinuous(alpha, eps, stable_m, bump_height)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn synthetic(power: f64) -> ResidualCurve {
        let points = log_grid(1e-4, 1e-2, 9)
            .unwrap()
            .into_iter()
            .map(|t| CurvePoint {
                t,
                truth: 0.0,
                truth_ci: None,
                sampling_half_width: None,
                residual: 0.3 * t.powf(power),
                residual_ci: (0.0, 0.0),
                bound: None,
            })
            .collect();
        ResidualCurve {
            model: "synthetic".into(),
            eps: 1.0,
            lambda_eps: 0.0,
            points,
        }
    }

    #[test]
    fn synthetic_slopes() {
        let two = fit_rate(&synthetic(2.0)).unwrap();
        assert_relative_eq!(two.slope, 2.0, epsilon = 1e-12);
        assert_relative_eq!(two.r2, 1.0, epsilon = 1e-12);
        let five_thirds = fit_rate(&synthetic(5.0 / 3.0)).unwrap();
        assert_relative_eq!(five_thirds.slope, 5.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn too_few_points() {
        let mut c = synthetic(2.0);
        c.points.truncate(2);
        assert!(matches!(fit_rate(&c), Err(Error::TooFewPoints { got: 2, needed: 3 })));
    }

    #[test]
    fn grids() {
        let g = log_grid(1e-3, 1e-1, 3).unwrap();
        assert_relative_eq!(g[1], 1e-2, max_relative = 1e-14);
        assert_eq!(g[2], 1e-1);
        assert_eq!(default_grid(1e-4, 1e-2).unwrap().len(), 25);
    }

    #[test]
    fn distance_to_interval() {
        assert_eq!(distance_interval(0.1, 0.3, 0.2), (0.0, 0.1_f64.max(0.1)));
        let (a, b) = distance_interval(0.3, 0.5, 0.1);
        assert_relative_eq!(a, 0.2);
        assert_relative_eq!(b, 0.4);
    }
}
