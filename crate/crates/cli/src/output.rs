//! JSON with 17 significant digits and output routing.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use levy_tail::harness::fmt_num;
use levy_tail::{Error, Result};
use serde::Serialize;
use serde_json::{Number, Value};

/// Rewrites every non-integer number as `{:.16e}` so output bytes do not
/// depend on the shortest-representation printer.
fn fix_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            if !s.contains(['.', 'e', 'E']) {
                return Value::Number(n);
            }
            match s.parse::<f64>() {
                Ok(x) if x.is_finite() => Number::from_str(&fmt_num(x)).map_or(Value::Null, Value::Number),
                _ => Value::Null,
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(fix_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, fix_numbers(v))).collect()),
        other => other,
    }
}

pub fn to_json<S: Serialize>(value: &S) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Config(format!("json: {e}")))?;
    let mut s = serde_json::to_string_pretty(&fix_numbers(v)).map_err(|e| Error::Config(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `out`, or to stdout when there is no path.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Config(format!("stdout: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_get_seventeen_digits() {
        #[derive(Serialize)]
        struct Row {
            x: f64,
            n: u64,
            missing: f64,
        }
        let s = to_json(&Row {
            x: 0.1,
            n: 7,
            missing: f64::NAN,
        })
        .unwrap();
        assert!(s.contains("\"x\": 1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"n\": 7"));
        assert!(s.contains("\"missing\": null"));
    }
}
