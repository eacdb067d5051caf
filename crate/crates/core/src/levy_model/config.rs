//! Model mini-format.
//!
//! Inline form: `cauchy`, `gamma`, `inverse_gaussian`, `stable(1.5, 1)`,
//! `tempered_stable(0.5, 2)`, `power_law(1, 0.5, 2)`,
//! `cpp(2, uniform(0.25, 1.5))`, `cpp(1, point(0.8))`,
//! `cpp(1, piecewise([0, 1, 2], [0.25, 0.75]))`,
//! `discontinuous(1.5, 1, 0.5, 0.06)`.
//! A TOML `[model]` table adds certificate overrides.

use serde::{Deserialize, Serialize};

use super::builtin::{cauchy, cpp, discontinuous, gamma_process, inverse_gaussian, power_law, stable, tempered_stable};
use super::{JumpLaw, LevyModel, LipschitzCert, Variation};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Num(f64),
    Call(String, Vec<Expr>),
    List(Vec<Expr>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error(&self, what: &str) -> Error {
        Error::Config(format!("{what} at offset {} in model spec '{}'", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let items = self.list(']')?;
                Ok(Expr::List(items))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name = self.src[start..self.pos].to_ascii_lowercase();
                if self.peek() == Some('(') {
                    self.pos += 1;
                    let args = self.list(')')?;
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Call(name, Vec::new()))
                }
            }
            Some(_) => {
                let start = self.pos;
                while self.src[self.pos..]
                    .starts_with(|c: char| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
                {
                    self.pos += 1;
                }
                self.src[start..self.pos]
                    .parse::<f64>()
                    .map(Expr::Num)
                    .map_err(|_| self.error("expected a number"))
            }
            None => Err(self.error("unexpected end")),
        }
    }

    fn list(&mut self, close: char) -> Result<Vec<Expr>> {
        let mut items = Vec::new();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(items);
                }
                _ => return Err(self.error(&format!("expected ',' or '{close}'"))),
            }
        }
    }
}

fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

fn nums(name: &str, args: &[Expr], arity: usize) -> Result<Vec<f64>> {
    if args.len() != arity {
        return Err(Error::Config(format!("{name} takes {arity} numeric arguments, got {}", args.len())));
    }
    args.iter()
        .map(|a| match a {
            Expr::Num(v) => Ok(*v),
            _ => Err(Error::Config(format!("{name}: arguments must be numbers"))),
        })
        .collect()
}

fn num_list<T: Real>(e: &Expr) -> Result<Vec<T>> {
    match e {
        Expr::List(items) => items
            .iter()
            .map(|i| match i {
                Expr::Num(v) => Ok(T::lit(*v)),
                _ => Err(Error::Config("lists must contain numbers".into())),
            })
            .collect(),
        _ => Err(Error::Config("expected a list like [0, 1, 2]".into())),
    }
}

fn jump_law<T: Real>(e: &Expr) -> Result<JumpLaw<T>> {
    let Expr::Call(name, args) = e else {
        return Err(Error::Config("jump law must be point(v), uniform(lo, hi) or piecewise([..], [..])".into()));
    };
    match name.as_str() {
        "point" | "point_mass" => JumpLaw::point_mass(T::lit(nums(name, args, 1)?[0])),
        "uniform" => {
            let v = nums(name, args, 2)?;
            JumpLaw::uniform(T::lit(v[0]), T::lit(v[1]))
        }
        "piecewise" if args.len() == 2 => JumpLaw::piecewise(num_list(&args[0])?, num_list(&args[1])?),
        other => Err(Error::UnsupportedJumpLaw(format!("unknown jump law '{other}'"))),
    }
}

fn builtin<T: Real>(e: &Expr) -> Result<LevyModel<T>> {
    let Expr::Call(name, args) = e else {
        return Err(Error::Config("model spec must start with a model name".into()));
    };
    let v = |arity| nums(name, args, arity).map(|v| v.into_iter().map(T::lit).collect::<Vec<T>>());
    match name.as_str() {
        "cauchy" => v(0).map(|_| cauchy()),
        "gamma" => v(0).map(|_| gamma_process()),
        "inverse_gaussian" | "ig" => v(0).map(|_| inverse_gaussian()),
        "stable" => v(2).and_then(|p| stable(p[0], p[1])),
        "tempered_stable" => v(2).and_then(|p| tempered_stable(p[0], p[1])),
        "power_law" => v(3).and_then(|p| power_law(p[0], p[1], p[2])),
        "discontinuous" => v(4).and_then(|p| discontinuous(p[0], p[1], p[2], p[3])),
        "cpp" => {
            if !(2..=3).contains(&args.len()) {
                return Err(Error::Config("cpp takes (lambda, jump_law[, class_alpha])".into()));
            }
            let lambda = T::lit(nums(name, &args[..1], 1)?[0]);
            let alpha = match args.get(2) {
                Some(Expr::Num(a)) => T::lit(*a),
                Some(_) => return Err(Error::Config("cpp class_alpha must be a number".into())),
                None => T::lit(0.5),
            };
            cpp(lambda, jump_law(&args[1])?, alpha)
        }
        other => Err(Error::Config(format!("unknown model '{other}'"))),
    }
}

/// Builds a builtin model from its inline form.
pub fn parse_inline<T: Real>(spec: &str) -> Result<LevyModel<T>> {
    builtin(&parse(spec.trim())?)
}

/// Lipschitz certificate as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LipschitzSpec {
    pub constant: f64,
    pub lo: f64,
    pub hi: f64,
    /// Enlarged class constant under which the Lipschitz bound is used.
    #[serde(rename = "M", default)]
    pub m: Option<f64>,
}

/// A model in the structured config: a builtin plus certificate overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: String,
    #[serde(rename = "class_M", default)]
    pub class_m: Option<f64>,
    #[serde(default)]
    pub class_alpha: Option<f64>,
    #[serde(rename = "global_M", default)]
    pub global_m: Option<f64>,
    #[serde(default)]
    pub symmetric: Option<bool>,
    #[serde(default)]
    pub variation: Option<Variation>,
    #[serde(default)]
    pub lipschitz: Option<LipschitzSpec>,
}

impl ModelSpec {
    pub fn inline(kind: impl Into<String>) -> Self {
        ModelSpec {
            kind: kind.into(),
            ..Default::default()
        }
    }

    pub fn build<T: Real>(&self) -> Result<LevyModel<T>> {
        let base: LevyModel<T> = parse_inline(&self.kind)?;
        if self.class_m.is_none()
            && self.class_alpha.is_none()
            && self.global_m.is_none()
            && self.symmetric.is_none()
            && self.variation.is_none()
            && self.lipschitz.is_none()
        {
            return Ok(base);
        }
        let mut b = base.to_builder();
        if let Some(m) = self.class_m {
            b = b.class_m(T::lit(m));
        }
        if let Some(a) = self.class_alpha {
            b = b.class_alpha(T::lit(a));
        }
        if let Some(g) = self.global_m {
            b = b.global_m(Some(T::lit(g)));
        }
        if let Some(s) = self.symmetric {
            b = b.symmetric(s);
        }
        if let Some(v) = self.variation {
            b = b.variation(v);
        }
        if let Some(l) = &self.lipschitz {
            let mut cert = LipschitzCert::fixed(T::lit(l.constant), T::lit(l.lo), T::lit(l.hi));
            if let Some(m) = l.m {
                cert = cert.with_class_m(T::lit(m));
            }
            b = b.lipschitz(Some(cert));
        }
        b.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_specs() {
        let e = parse("cpp(2, piecewise([0, 1, 2], [0.25, 0.75]))").unwrap();
        let Expr::Call(name, args) = e else { panic!() };
        assert_eq!(name, "cpp");
        assert_eq!(args.len(), 2);
        assert!(parse("stable(1.5,").is_err());
        assert!(parse("stable(1.5) x").is_err());
    }

    #[test]
    fn builds_every_builtin() {
        for spec in [
            "cauchy",
            "gamma()",
            "ig",
            "stable(1.5, 1)",
            "tempered_stable(0.5, 2)",
            "power_law(1, 0.5, 2)",
            "cpp(2, uniform(0.25, 1.5))",
            "cpp(1, point(0.8))",
            "cpp(1, piecewise([-1, 0, 1], [0.5, 0.5]), 0.75)",
            "discontinuous(1.5, 1, 0.5, 0.06)",
        ] {
            parse_inline::<f64>(spec).unwrap_or_else(|e| panic!("{spec}: {e}"));
        }
        assert!(matches!(parse_inline::<f64>("levy"), Err(Error::Config(_))));
        assert!(matches!(parse_inline::<f64>("stable(2.5, 1)"), Err(Error::AlphaOutOfRange { .. })));
    }

    #[test]
    fn overrides_apply() {
        let spec = ModelSpec {
            kind: "cauchy".into(),
            lipschitz: Some(LipschitzSpec {
                constant: 1.6,
                lo: 0.5,
                hi: 10.0,
                m: Some(1.6),
            }),
            class_m: Some(0.5),
            ..Default::default()
        };
        let m: LevyModel<f64> = spec.build().unwrap();
        assert_eq!(m.class_m(), 0.5);
        assert_eq!(m.lipschitz().unwrap().class_m, Some(1.6));
    }
}
