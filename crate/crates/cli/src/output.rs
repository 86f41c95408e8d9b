//! Output assembly: CSV with a commented config header, or JSON with an
//! embedded config object. Numbers are written with Rust's shortest
//! round-trip formatting, so parsing them back recovers the exact values.

use serde_json::{Map, Value};

use crate::config::{CliError, CliResult, RunConfig};

/// Effective-config entries echoed into every output. `workers` and `out`
/// are deliberately excluded: they do not affect computed results, and
/// keeping them out makes outputs byte-comparable across worker counts and
/// destinations.
pub fn effective_config(cfg: &RunConfig, entries: &[(&str, String)]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if let Some(kind) = cfg.potential {
        out.push(("potential".to_string(), kind.name().to_string()));
    }
    for (k, v) in cfg.potential_params() {
        out.push((k.to_string(), v));
    }
    for (k, v) in entries {
        out.push((k.to_string(), v.clone()));
    }
    out.push(("format".to_string(), cfg.format.name().to_string()));
    out
}

/// A CSV document under construction.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(command: &str, config: &[(String, String)]) -> Self {
        let mut text = format!("# sturmwell {command}\n");
        for (k, v) in config {
            text.push_str(&format!("# {k} = {v}\n"));
        }
        Csv { text }
    }

    pub fn comment(&mut self, line: &str) {
        self.text.push_str(&format!("# {line}\n"));
    }

    pub fn header(&mut self, columns: &str) {
        self.text.push_str(columns);
        self.text.push('\n');
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// JSON document: config object plus command-specific payload.
pub fn json_document(command: &str, config: &[(String, String)], payload: Value) -> String {
    let mut cfg = Map::new();
    for (k, v) in config {
        cfg.insert(k.clone(), Value::String(v.clone()));
    }
    let mut doc = Map::new();
    doc.insert("command".to_string(), Value::String(command.to_string()));
    doc.insert("config".to_string(), Value::Object(cfg));
    if let Value::Object(m) = payload {
        for (k, v) in m {
            doc.insert(k, v);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    text.push('\n');
    text
}

/// Write to the configured destination (file or standard output).
pub fn emit(cfg: &RunConfig, text: &str) -> CliResult<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            CliError::Config(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// f64 -> JSON number; non-finite values become strings so serialization
/// cannot fail.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(v.to_string()))
}
