//! Deterministic CSV/JSON serialization.
//!
//! Floats in CSV are printed with 17 significant digits so that equal
//! values produce equal bytes and byte-level determinism is testable. Every
//! file embeds the resolved run spec: a `#` comment line in CSV, a `spec`
//! field in JSON, each parseable back as a config file.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::CliError;

/// 17 significant digits: round-trips every f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Resolved `key=value` pairs describing a run, in emission order.
pub type SpecPairs = Vec<(&'static str, String)>;

pub fn spec_comment_line(pairs: &SpecPairs) -> String {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# {}", body.join(" "))
}

pub fn spec_json(pairs: &SpecPairs) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert((*k).to_string(), Value::String(v.clone()));
    }
    Value::Object(map)
}

/// Runs `emit` against the chosen sink (file or stdout) and flushes.
pub fn with_writer<F>(out: Option<&Path>, emit: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            emit(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            emit(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn write_csv(
    w: &mut dyn Write,
    pairs: &SpecPairs,
    header: &str,
    rows: &[Vec<String>],
) -> io::Result<()> {
    writeln!(w, "{}", spec_comment_line(pairs))?;
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_json(w: &mut dyn Write, value: &Value) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable value");
    writeln!(w, "{text}")
}

/// JSON document with the spec object first.
pub fn json_document(pairs: &SpecPairs, fields: Vec<(&'static str, Value)>) -> Value {
    let mut map = Map::new();
    map.insert("spec".to_string(), spec_json(pairs));
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// Lossless JSON value for an f64 (serde_json prints the shortest string
/// that round-trips, so output stays byte-deterministic).
pub fn json_f64(x: f64) -> Value {
    json!(x)
}
