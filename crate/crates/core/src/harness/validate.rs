//! Checking that bounds dominate the truth on a grid.

use std::collections::HashMap;

use serde::Serialize;

use super::truth::{increment_truth, small_jump_truth, McTruth, Truth, TruthPoint};
use crate::bounds::{auto_select_with, by_theorem, BoundOptions, Target, Theorem};
use crate::{Bound, Error, Model, Result};

/// Which bounds to check and how.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidateConfig {
    /// Bounds to evaluate; empty means the automatically selected one.
    pub theorems: Vec<Theorem>,
    pub opts: BoundOptions<f64>,
    /// Monte Carlo settings for small-jump targets, which have no closed form.
    pub small_jump_truth: McTruth,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig {
            theorems: Vec::new(),
            opts: BoundOptions::default(),
            small_jump_truth: McTruth::new(100_000, 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    /// No valid bound at this point; the reason is in `note`.
    Skipped,
}

/// One (ε, t, bound) comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationRow {
    pub model: String,
    pub eps: f64,
    pub t: f64,
    pub theorem: Option<Theorem>,
    pub target: Option<Target>,
    pub lambda_eps: f64,
    pub truth: Option<TruthPoint>,
    /// The compared statistic: the residual, or the probability itself.
    pub statistic: f64,
    /// Lowest value of the statistic consistent with the truth's uncertainty.
    pub statistic_low: f64,
    pub bound: Option<Bound>,
    /// bound − statistic_low
    pub margin: f64,
    pub status: RowStatus,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum TruthKey {
    Increment,
    Drifted,
    TwoSided,
    Upper,
}

fn truth_key(target: Target) -> TruthKey {
    match target {
        Target::Residual | Target::Probability => TruthKey::Increment,
        Target::DriftedSmallJumps => TruthKey::Drifted,
        Target::SmallJumps { two_sided: true } => TruthKey::TwoSided,
        Target::SmallJumps { two_sided: false } => TruthKey::Upper,
    }
}

/// Compares every valid bound on the (ε, t) grid with the truth. A point
/// passes when the lowest statistic consistent with the truth's interval is
/// at most the bound. Points without a valid bound, or where the truth cannot
/// be computed with a certified bias, are reported as skipped.
pub fn validate_bounds(
    model: &Model,
    eps_grid: &[f64],
    t_grid: &[f64],
    truth: &Truth,
    cfg: &ValidateConfig,
) -> Result<ValidationReport> {
    let mut rows = Vec::new();
    for (ei, &eps) in eps_grid.iter().enumerate() {
        let lam = model.lambda(eps)?;
        for (ti, &t) in t_grid.iter().enumerate() {
            let stream_id = ((ei as u64) << 32) | ti as u64;
            let mut cache: HashMap<TruthKey, TruthPoint> = HashMap::new();
            let bounds: Vec<(Option<Theorem>, Result<Bound>)> = if cfg.theorems.is_empty() {
                vec![(None, auto_select_with(model, eps, t, &cfg.opts))]
            } else {
                cfg.theorems
                    .iter()
                    .map(|&th| (Some(th), by_theorem(model, th, eps, t, &cfg.opts)))
                    .collect()
            };
            for (requested, bound) in bounds {
                let skipped = |note: String| ValidationRow {
                    model: model.name().to_string(),
                    eps,
                    t,
                    theorem: requested,
                    target: None,
                    lambda_eps: lam.value,
                    truth: None,
                    statistic: f64::NAN,
                    statistic_low: f64::NAN,
                    bound: None,
                    margin: f64::NAN,
                    status: RowStatus::Skipped,
                    note,
                };
                let bound = match bound {
                    Ok(b) if b.valid => b,
                    Ok(b) => {
                        rows.push(ValidationRow {
                            theorem: Some(b.theorem),
                            target: Some(b.target),
                            bound: Some(b.clone()),
                            ..skipped(format!("t = {t} outside the validity window t_max = {}", b.t_max))
                        });
                        continue;
                    }
                    Err(e) => {
                        rows.push(skipped(e.to_string()));
                        continue;
                    }
                };
                let key = truth_key(bound.target);
                let tp = match cache.get(&key) {
                    Some(tp) => *tp,
                    None => {
                        let tp = match key {
                            TruthKey::Increment => increment_truth(model, eps, t, truth, stream_id),
                            _ => small_jump_truth(model, eps, t, bound.target, &cfg.small_jump_truth, stream_id),
                        };
                        match tp {
                            Ok(tp) => {
                                cache.insert(key, tp);
                                tp
                            }
                            // no trustworthy truth here, e.g. no certifiable truncation
                            Err(e @ (Error::SchemeInfeasible(_) | Error::TruthUnavailable(_))) => {
                                rows.push(ValidationRow {
                                    theorem: Some(bound.theorem),
                                    target: Some(bound.target),
                                    bound: Some(bound.clone()),
                                    ..skipped(format!("truth: {e}"))
                                });
                                continue;
                            }
                            Err(e) => return Err(e),
                        }
                    }
                };
                let (statistic, statistic_low) = if bound.target == Target::Residual {
                    let centre = lam.value * t;
                    let slack = lam.abs_error_estimate * t;
                    let low = match tp.ci {
                        Some((lo, hi)) if lo <= centre && centre <= hi => 0.0,
                        Some((lo, hi)) => (lo - centre).abs().min((hi - centre).abs()),
                        None => (tp.value - centre).abs() - tp.abs_error,
                    };
                    ((tp.value - centre).abs(), (low - slack).max(0.0))
                } else {
                    (tp.value, tp.low())
                };
                let pass = statistic_low <= bound.value;
                rows.push(ValidationRow {
                    model: model.name().to_string(),
                    eps,
                    t,
                    theorem: Some(bound.theorem),
                    target: Some(bound.target),
                    lambda_eps: lam.value,
                    truth: Some(tp),
                    statistic,
                    statistic_low,
                    margin: bound.value - statistic_low,
                    bound: Some(bound),
                    status: if pass { RowStatus::Pass } else { RowStatus::Fail },
                    note: String::new(),
                });
            }
        }
    }
    let count = |s: RowStatus| rows.iter().filter(|r| r.status == s).count();
    Ok(ValidationReport {
        passed: count(RowStatus::Pass),
        failed: count(RowStatus::Fail),
        skipped: count(RowStatus::Skipped),
        rows,
    })
}
