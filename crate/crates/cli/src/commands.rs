//! The subcommands.

use levy_tail::bounds::{auto_select_with, by_theorem, constants as constants_table, BoundOptions, Constant, Perturbation, Theorem};
use levy_tail::harness::{
    closed_form_tail, curve_csv, default_grid, fit_rate, fmt_num, log_grid, residual_curve, validate_bounds,
    validation_csv, McTruth, RateFit, SchemeChoice, Truth, ValidateConfig,
};
use levy_tail::simulate::{estimate, CiMethod, IncrementSampler, McConfig, Rng, SeededStream, SmallJumpScheme, Tail};
use levy_tail::{Error, Model, Result};
use serde::Serialize;

use crate::output::{emit, to_json};
use crate::settings::{Format, Settings, TruthSource};
use crate::Failure;

const MAX_JUMPS_PER_DRAW: f64 = 100.0;

fn parse_theorems(s: Option<&str>) -> Result<Vec<Theorem>> {
    let Some(s) = s else { return Ok(Vec::new()) };
    if s.trim() == "auto" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|name| {
            let name = name.trim();
            Theorem::from_name(name).ok_or_else(|| {
                Error::Config(format!(
                    "unknown theorem '{name}'; expected auto, ps1, teo1, ps2, lambda2bis, lambda2 or corollary"
                ))
            })
        })
        .collect()
}

fn mc_truth(s: &Settings, default_n: u64) -> McTruth {
    McTruth::new(s.n.unwrap_or(default_n), s.seed)
        .shards(s.shards)
        .method(CiMethod::ClopperPearson, s.confidence)
        .scheme(SchemeChoice::Certified {
            bias_budget: s.bias_budget,
            max_margin_frac: 0.5,
            max_jumps: MAX_JUMPS_PER_DRAW,
        })
}

/// Closed-form truth when asked for or, by default, when the model has one.
fn truth(s: &Settings, model: &Model, default_n: u64) -> Truth {
    let closed = match s.truth {
        Some(TruthSource::Closed) => true,
        Some(TruthSource::Mc) => false,
        None => closed_form_tail(model, 1.0, 1e-3).is_ok(),
    };
    if closed {
        Truth::ClosedForm
    } else {
        Truth::MonteCarlo(mc_truth(s, default_n))
    }
}

#[derive(Serialize)]
struct FunctionalRow {
    a: f64,
    lambda: f64,
    lambda_err: f64,
    sigma2: f64,
    sigma2_err: f64,
    drift: f64,
    drift_err: f64,
}

pub fn functionals(s: &Settings) -> std::result::Result<(), Failure> {
    let model = s.model()?;
    let grid = s.eps_values(&log_grid(1e-3, 2.0, 12)?)?;
    let rows = grid
        .iter()
        .map(|&a| {
            let (l, v, b) = (model.lambda(a)?, model.sigma2(a)?, model.drift(a)?);
            Ok(FunctionalRow {
                a,
                lambda: l.value,
                lambda_err: l.abs_error_estimate,
                sigma2: v.value,
                sigma2_err: v.abs_error_estimate,
                drift: b.value,
                drift_err: b.abs_error_estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match s.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out = String::from("a,lambda,lambda_err,sigma2,sigma2_err,drift,drift_err\n");
            for r in &rows {
                let cells = [r.a, r.lambda, r.lambda_err, r.sigma2, r.sigma2_err, r.drift, r.drift_err];
                out.push_str(&cells.map(fmt_num).join(","));
                out.push('\n');
            }
            out
        }
    };
    Ok(emit(s.out.as_deref(), &text)?)
}

pub fn constants(s: &Settings, alpha: f64, class_m: Option<f64>) -> std::result::Result<(), Failure> {
    let table = constants_table(alpha, class_m, s.eps)?;
    let entries: std::collections::BTreeMap<&str, f64> =
        table.entries.iter().map(|(c, v)| (Constant::name(*c), *v)).collect();
    Ok(emit(s.out.as_deref(), &to_json(&entries)?)?)
}

pub fn bound(s: &Settings) -> std::result::Result<(), Failure> {
    let model = s.model()?;
    let (eps, t) = (s.require_eps()?, s.require_t()?);
    let theorems = parse_theorems(s.theorem.as_deref())?;
    let opts = BoundOptions::default();
    let b = match theorems[..] {
        [] => auto_select_with(&model, eps, t, &opts)?,
        [th] => by_theorem(&model, th, eps, t, &opts)?,
        _ => return Err(Error::Config("bound takes a single theorem".into()).into()),
    };
    emit(s.out.as_deref(), &to_json(&b)?)?;
    if !b.valid {
        return Err(Error::NoApplicableBound { eps, t }.into());
    }
    Ok(())
}

fn parse_perturbation(spec: &str) -> Result<Perturbation<f64>> {
    let bad = || Error::Config(format!("perturbation must be NAME:FACTOR or bound:FACTOR, got '{spec}'"));
    let (name, factor) = spec.split_once(':').ok_or_else(bad)?;
    let factor: f64 = factor.trim().parse().map_err(|_| bad())?;
    let constant = match name.trim() {
        "bound" => None,
        other => Some(Constant::from_name(other).ok_or_else(|| Error::Config(format!("unknown constant '{other}'")))?),
    };
    Ok(Perturbation { constant, factor })
}

pub fn validate(s: &Settings, perturb: Option<&str>, self_test: bool) -> std::result::Result<(), Failure> {
    let model = s.model()?;
    let eps_grid = s.eps_values(&[1.0])?;
    let t_grid = s.t_values(|| default_grid(1e-4, 1e-1))?;
    let mut opts = BoundOptions::default();
    if let Some(p) = perturb {
        opts = opts.perturbed(parse_perturbation(p)?);
    }
    if self_test {
        opts = opts.perturbed(Perturbation {
            constant: None,
            factor: 0.0,
        });
    }
    let cfg = ValidateConfig {
        theorems: parse_theorems(s.theorem.as_deref())?,
        opts,
        small_jump_truth: mc_truth(s, 100_000),
    };
    let report = validate_bounds(&model, &eps_grid, &t_grid, &truth(s, &model, 100_000), &cfg)?;
    let text = match s.format.unwrap_or(Format::Csv) {
        Format::Csv => validation_csv(&report)?,
        Format::Json => to_json(&report)?,
    };
    emit(s.out.as_deref(), &text)?;
    eprintln!(
        "{} passed, {} failed, {} skipped",
        report.passed, report.failed, report.skipped
    );
    if report.failed > 0 {
        return Err(Failure::Check(format!("{} grid points where the truth exceeds the bound", report.failed)));
    }
    if report.passed == 0 {
        return Err(Error::NoApplicableBound {
            eps: eps_grid[0],
            t: t_grid[0],
        }
        .into());
    }
    Ok(())
}

#[derive(Serialize)]
struct RateSummary<'a> {
    model: &'a str,
    eps: f64,
    lambda_eps: f64,
    fit: RateFit,
    points: &'a [levy_tail::harness::CurvePoint],
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Config(format!("slope window must be lo:hi with lo <= hi, got '{s}'"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (f64, f64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo <= hi {
        Ok((lo, hi))
    } else {
        Err(bad())
    }
}

pub fn rate(s: &Settings, window: Option<&str>) -> std::result::Result<(), Failure> {
    let model = s.model()?;
    let window = window.map(parse_window).transpose()?;
    let eps = s.eps.unwrap_or(1.0);
    let t_grid = match &s.t_grid {
        Some(g) => crate::settings::parse_grid("t-grid", g)?,
        None => default_grid(1e-4, 1e-2)?,
    };
    let curve = residual_curve(&model, eps, &t_grid, &truth(s, &model, 1_000_000))?;
    let fit = fit_rate(&curve)?;
    let text = match s.format.unwrap_or(Format::Json) {
        Format::Csv => curve_csv(std::slice::from_ref(&curve))?,
        Format::Json => to_json(&RateSummary {
            model: &curve.model,
            eps,
            lambda_eps: curve.lambda_eps,
            fit,
            points: &curve.points,
        })?,
    };
    emit(s.out.as_deref(), &text)?;
    eprintln!(
        "slope {:.4} (R² {:.4}) over {} points",
        fit.slope, fit.r2, fit.points_used
    );
    match window {
        Some((lo, hi)) if !(lo..=hi).contains(&fit.slope) => Err(Failure::Check(format!(
            "slope {} outside the window [{lo}, {hi}]",
            fit.slope
        ))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct SimulateSummary<'a> {
    model: &'a str,
    eps: f64,
    t: f64,
    seed: u64,
    estimate: levy_tail::simulate::MCEstimate,
    scheme: Option<SmallJumpScheme>,
}

pub fn simulate(s: &Settings) -> std::result::Result<(), Failure> {
    let model = s.model()?;
    let (eps, t) = (s.require_eps()?, s.require_t()?);
    let cfg = McConfig {
        n: s.n.unwrap_or(1_000_000),
        confidence: s.confidence,
        stream: SeededStream::new(s.seed, 0),
        shards: s.shards,
        method: CiMethod::ClopperPearson,
    };
    let (est, scheme) = match IncrementSampler::new(&model, t, None) {
        Ok(sampler) => (estimate(|r: &mut Rng| sampler.sample(r), eps, Tail::Both, None, &cfg)?, None),
        Err(Error::SchemeInfeasible(_)) => {
            let scheme =
                SmallJumpScheme::calibrate(&model, eps, t, s.bias_budget, eps / 2.0, false, MAX_JUMPS_PER_DRAW)?;
            let sampler = IncrementSampler::new(&model, t, Some(&scheme))?;
            let est = estimate(|r: &mut Rng| sampler.sample(r), eps, Tail::Both, Some(&scheme), &cfg)?;
            (est, Some(scheme))
        }
        Err(e) => return Err(e.into()),
    };
    let summary = SimulateSummary {
        model: model.name(),
        eps,
        t,
        seed: s.seed,
        estimate: est,
        scheme,
    };
    Ok(emit(s.out.as_deref(), &to_json(&summary)?)?)
}
