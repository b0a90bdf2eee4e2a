//! Formatting shared by the subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Significant digits for machine-readable output.
pub const MACHINE_DIGITS: usize = 12;
/// Significant digits for text output.
pub const TEXT_DIGITS: usize = 6;

impl Format {
    pub fn digits(self) -> usize {
        match self {
            Format::Text => TEXT_DIGITS,
            _ => MACHINE_DIGITS,
        }
    }
}

/// `x` rounded to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Rounds every floating-point number inside `v`.
pub fn round_json(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if let Some(r) = Number::from_f64(round_sig(x, digits)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|i| round_json(i, digits)),
        Value::Object(map) => map.values_mut().for_each(|i| round_json(i, digits)),
        _ => {}
    }
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Stdout or the file given with `--out`.
pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Flattens nested objects into dotted keys; arrays stay as compact JSON.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

/// Writes one record: pretty JSON, `field,value` CSV, or aligned text.
pub fn emit_record(mut v: Value, format: Format, w: &mut dyn Write) -> io::Result<()> {
    round_json(&mut v, format.digits());
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &v)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut pairs = Vec::new();
            flatten("", &v, &mut pairs);
            let mut cw = csv::Writer::from_writer(&mut *w);
            cw.write_record(["field", "value"])?;
            for (k, val) in pairs {
                cw.write_record([k, val])?;
            }
            cw.flush()?;
        }
        Format::Text => {
            let mut pairs = Vec::new();
            flatten("", &v, &mut pairs);
            let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, val) in pairs {
                writeln!(w, "{k:<width$}  {val}")?;
            }
        }
    }
    w.flush()
}

/// Writes rows of flat objects as a JSON array, a CSV table, or an aligned
/// text table. Every row must have the same keys.
pub fn emit_table(rows: Vec<Map<String, Value>>, format: Format, w: &mut dyn Write) -> io::Result<()> {
    let digits = format.digits();
    let mut rows: Vec<Value> = rows.into_iter().map(Value::Object).collect();
    rows.iter_mut().for_each(|r| round_json(r, digits));
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(m)) => m.keys().cloned().collect(),
        _ => Vec::new(),
    };
    let cells = |r: &Value| -> Vec<String> {
        header.iter().map(|k| scalar_text(&r[k.as_str()])).collect()
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &rows)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut cw = csv::Writer::from_writer(&mut *w);
            cw.write_record(&header)?;
            for r in &rows {
                cw.write_record(cells(r))?;
            }
            cw.flush()?;
        }
        Format::Text => {
            let body: Vec<Vec<String>> = rows.iter().map(cells).collect();
            let widths: Vec<usize> = (0..header.len())
                .map(|j| body.iter().map(|r| r[j].len()).chain([header[j].len()]).max().unwrap_or(0))
                .collect();
            let line = |cols: &[String]| {
                cols.iter()
                    .zip(&widths)
                    .map(|(c, &wd)| format!("{c:>wd$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(w, "{}", line(&header))?;
            for r in &body {
                writeln!(w, "{}", line(r))?;
            }
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.123456789012345, 12), 0.123456789012);
        assert_eq!(round_sig(29.0 / 450.0, 6), 0.0644444);
        assert_eq!(round_sig(0.0, 6), 0.0);
        assert_eq!(round_sig(-1234567.0, 3), -1230000.0);
    }

    #[test]
    fn rounds_nested_numbers_only() {
        let mut v = serde_json::json!({"a": 1.0 / 3.0, "b": [2.0 / 3.0, 7], "c": "x"});
        round_json(&mut v, 3);
        assert_eq!(v, serde_json::json!({"a": 0.333, "b": [0.667, 7], "c": "x"}));
    }
}
