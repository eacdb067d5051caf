//! CSV emitters. Numbers carry 17 significant digits so that identical runs
//! produce identical bytes.

use csv::Writer;

use super::validate::{RowStatus, ValidationReport};
use super::ResidualCurve;
use crate::{Error, Result};

const COLUMNS: [&str; 14] = [
    "model",
    "eps",
    "t",
    "truth",
    "ci_low",
    "ci_high",
    "lambda_eps",
    "residual",
    "bound",
    "theorem",
    "valid",
    "margin",
    "target",
    "status",
];

/// Scientific notation with 17 significant digits; empty for NaN.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, fmt_num)
}

fn finish(w: Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

/// One row per (model, ε, t) of the residual curves.
pub fn curve_csv(curves: &[ResidualCurve]) -> Result<String> {
    let mut w = Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).map_err(csv_err)?;
    for c in curves {
        for p in &c.points {
            let (lo, hi) = p.truth_ci.unzip();
            let bound = p.bound.as_ref();
            let record = [
                c.model.clone(),
                fmt_num(c.eps),
                fmt_num(p.t),
                fmt_num(p.truth),
                opt(lo),
                opt(hi),
                fmt_num(c.lambda_eps),
                fmt_num(p.residual),
                opt(bound.map(|b| b.value)),
                bound.map_or_else(String::new, |b| b.theorem.to_string()),
                bound.is_some_and(|b| b.valid).to_string(),
                opt(bound.map(|b| b.value - p.residual_ci.0)),
                bound.map_or_else(String::new, |_| "residual".to_string()),
                String::new(),
            ];
            w.write_record(&record).map_err(csv_err)?;
        }
    }
    finish(w)
}

fn status_name(s: &RowStatus) -> &'static str {
    match s {
        RowStatus::Pass => "PASS",
        RowStatus::Fail => "FAIL",
        RowStatus::Skipped => "SKIPPED",
    }
}

/// One row per (model, ε, t, bound) of a validation report.
pub fn validation_csv(report: &ValidationReport) -> Result<String> {
    let mut w = Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in &report.rows {
        let (lo, hi) = r.truth.and_then(|tp| tp.ci).unzip();
        let target = r.target.map_or_else(String::new, |t| t.name().to_string());
        let record = [
            r.model.clone(),
            fmt_num(r.eps),
            fmt_num(r.t),
            opt(r.truth.map(|tp| tp.value)),
            opt(lo),
            opt(hi),
            fmt_num(r.lambda_eps),
            fmt_num(r.statistic),
            opt(r.bound.as_ref().map(|b| b.value)),
            r.theorem.map_or_else(String::new, |t| t.to_string()),
            r.bound.as_ref().is_some_and(|b| b.valid).to_string(),
            fmt_num(r.margin),
            target,
            status_name(&r.status).to_string(),
        ];
        w.write_record(&record).map_err(csv_err)?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(f64::NAN), "");
        assert_eq!(fmt_num(-2.0), "-2.0000000000000000e0");
    }
}
