//! Flags, the optional TOML config file, and their merge.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use levy_tail::harness::log_grid;
use levy_tail::levy_model::ModelSpec;
use levy_tail::{Error, Model, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthSource {
    Closed,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by every subcommand. Each one may also be given in the
/// config file under the same name with `-` replaced by `_`.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with default values for any of the options below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Inline model such as `cauchy` or `power_law(1, 0.5, 2)`, or a TOML file
    /// holding a model table.
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// `lo:hi:points` (log-spaced) or a comma-separated list.
    #[arg(long, global = true)]
    pub t_grid: Option<String>,
    /// `lo:hi:points` (log-spaced) or a comma-separated list.
    #[arg(long, global = true)]
    pub eps_grid: Option<String>,
    /// Monte Carlo sample size; accepts forms like `1e6`.
    #[arg(long, global = true)]
    pub n: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub shards: Option<usize>,
    #[arg(long, global = true)]
    pub confidence: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub truth: Option<TruthSource>,
    /// `auto` or a comma-separated list of ps1, teo1, ps2, lambda2bis,
    /// lambda2, corollary.
    #[arg(long, global = true)]
    pub theorem: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Certified bias budget for simulated small jumps.
    #[arg(long, global = true)]
    pub bias_budget: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ModelEntry {
    Inline(String),
    Table(ModelSpec),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<ModelEntry>,
    eps: Option<f64>,
    t: Option<f64>,
    t_grid: Option<String>,
    eps_grid: Option<String>,
    n: Option<f64>,
    seed: Option<u64>,
    shards: Option<usize>,
    confidence: Option<f64>,
    truth: Option<TruthSource>,
    theorem: Option<String>,
    out: Option<PathBuf>,
    format: Option<Format>,
    bias_budget: Option<f64>,
}

/// Flags merged over the config file, checked but not yet interpreted per
/// command.
#[derive(Debug, Clone)]
pub struct Settings {
    model: Option<ModelSpec>,
    pub eps: Option<f64>,
    pub t: Option<f64>,
    pub t_grid: Option<String>,
    pub eps_grid: Option<String>,
    pub n: Option<u64>,
    pub seed: u64,
    pub shards: usize,
    pub confidence: f64,
    pub truth: Option<TruthSource>,
    pub theorem: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub bias_budget: f64,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn model_from_arg(arg: &str) -> Result<ModelSpec> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(ModelSpec::inline(arg));
    }
    #[derive(Deserialize)]
    struct Wrapped {
        model: ModelEntry,
    }
    let text = read(path)?;
    // a bare model table, or a file whose `model` key holds one
    match toml::from_str::<ModelSpec>(&text) {
        Ok(spec) => Ok(spec),
        Err(bare) => match toml::from_str::<Wrapped>(&text) {
            Ok(Wrapped {
                model: ModelEntry::Table(spec),
            }) => Ok(spec),
            Ok(Wrapped {
                model: ModelEntry::Inline(s),
            }) => Ok(ModelSpec::inline(s)),
            Err(_) => Err(Error::Config(format!("{}: {bare}", path.display()))),
        },
    }
}

/// Parses counts such as `1000000` or `1e6`.
pub fn parse_count(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(63) => Ok(x as u64),
        _ => Err(Error::Config(format!("n must be a non-negative integer, got '{s}'"))),
    }
}

/// A grid written as `lo:hi:points` (log-spaced) or `a,b,c`.
pub fn parse_grid(name: &str, s: &str) -> Result<Vec<f64>> {
    let bad = |what: String| Error::Config(format!("{name}: {what}"));
    let grid = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [lo, hi, points] = parts[..] else {
            return Err(bad(format!("expected lo:hi:points, got '{s}'")));
        };
        let num = |p: &str| p.parse::<f64>().map_err(|_| bad(format!("'{p}' is not a number")));
        let points = parse_count(points).map_err(|_| bad(format!("'{points}' is not a point count")))?;
        log_grid(num(lo)?, num(hi)?, points as usize).map_err(|e| bad(e.to_string()))?
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad(format!("'{p}' is not a number"))))
            .collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() || grid.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(bad(format!("every value must be positive and finite, got '{s}'")));
    }
    Ok(grid)
}

impl Settings {
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => toml::from_str::<FileConfig>(&read(path)?)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
            None => FileConfig::default(),
        };
        let model = match (&flags.model, file.model) {
            (Some(arg), _) => Some(model_from_arg(arg)?),
            (None, Some(ModelEntry::Inline(s))) => Some(model_from_arg(&s)?),
            (None, Some(ModelEntry::Table(spec))) => Some(spec),
            (None, None) => None,
        };
        let n = match (&flags.n, file.n) {
            (Some(s), _) => Some(parse_count(s)?),
            (None, Some(x)) => Some(parse_count(&x.to_string())?),
            (None, None) => None,
        };
        let settings = Settings {
            model,
            eps: flags.eps.or(file.eps),
            t: flags.t.or(file.t),
            t_grid: flags.t_grid.clone().or(file.t_grid),
            eps_grid: flags.eps_grid.clone().or(file.eps_grid),
            n,
            seed: flags.seed.or(file.seed).unwrap_or(1),
            shards: flags.shards.or(file.shards).unwrap_or(1),
            confidence: flags.confidence.or(file.confidence).unwrap_or(0.99),
            truth: flags.truth.or(file.truth),
            theorem: flags.theorem.clone().or(file.theorem),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format),
            bias_budget: flags.bias_budget.or(file.bias_budget).unwrap_or(1e-4),
        };
        settings.check()?;
        Ok(settings)
    }

    fn check(&self) -> Result<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => Err(Error::Config(format!("{name} > 0 required, got {x}"))),
            _ => Ok(()),
        };
        positive("eps", self.eps)?;
        positive("t", self.t)?;
        positive("bias_budget", Some(self.bias_budget))?;
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Config(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        if self.shards == 0 {
            return Err(Error::Config("shards >= 1 required".into()));
        }
        if self.n == Some(0) {
            return Err(Error::Config("n >= 1 required".into()));
        }
        Ok(())
    }

    pub fn model(&self) -> Result<Model> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::Config("a model is required (--model or `model` in the config file)".into()))?
            .build()
    }

    pub fn require_eps(&self) -> Result<f64> {
        self.eps.ok_or_else(|| Error::Config("--eps is required".into()))
    }

    pub fn require_t(&self) -> Result<f64> {
        self.t.ok_or_else(|| Error::Config("--t is required".into()))
    }

    /// `--eps-grid`, else the single `--eps`, else `default`.
    pub fn eps_values(&self, default: &[f64]) -> Result<Vec<f64>> {
        match (&self.eps_grid, self.eps) {
            (Some(g), _) => parse_grid("eps-grid", g),
            (None, Some(e)) => Ok(vec![e]),
            (None, None) => Ok(default.to_vec()),
        }
    }

    /// `--t-grid`, else the single `--t`, else `default`.
    pub fn t_values(&self, default: impl FnOnce() -> Result<Vec<f64>>) -> Result<Vec<f64>> {
        match (&self.t_grid, self.t) {
            (Some(g), _) => parse_grid("t-grid", g),
            (None, Some(t)) => Ok(vec![t]),
            (None, None) => default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_grids() {
        assert_eq!(parse_count("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("250").unwrap(), 250);
        assert!(parse_count("1.5").is_err());
        assert_eq!(parse_grid("g", "0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_grid("g", "1e-3:1e-1:3").unwrap().len(), 3);
        assert!(parse_grid("g", "0,1").is_err());
        assert!(parse_grid("g", "1:2").is_err());
    }
}
