use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

/// A table with `#` metadata lines and a JSON mirror.
#[derive(Debug, Clone)]
pub struct Report {
    pub meta: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
    /// Print JSON rather than CSV when no output path is given.
    pub json_primary: bool,
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{:?}", x + 0.0)
}

impl Report {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { meta: Vec::new(), header, rows: Vec::new(), json: Value::Null, json_primary: false }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn to_csv(&self, cfg: &RunConfig) -> String {
        let mut s = format!("# command: {}\n# version: {}\n# config_hash: {}\n", cfg.command, env!("CARGO_PKG_VERSION"), cfg.hash());
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self, cfg: &RunConfig) -> Value {
        let meta: serde_json::Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        json!({
            "command": cfg.command,
            "version": env!("CARGO_PKG_VERSION"),
            "config_hash": cfg.hash(),
            "meta": meta,
            "result": self.json,
        })
    }

    /// Writes CSV to `out` and JSON next to it, or prints to `stdout`.
    pub fn emit(&self, cfg: &RunConfig, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(&self.to_json(cfg)).map_err(|e| CliError::validation(e.to_string()))?;
        match out {
            Some(p) => {
                let io = |e: std::io::Error| CliError::validation(format!("cannot write {}: {e}", p.display()));
                std::fs::write(p, self.to_csv(cfg)).map_err(io)?;
                std::fs::write(p.with_extension("json"), json + "\n").map_err(io)?;
            }
            None => {
                let text = if self.json_primary { json + "\n" } else { self.to_csv(cfg) };
                stdout.write_all(text.as_bytes()).map_err(|e| CliError::validation(e.to_string()))?;
            }
        }
        Ok(())
    }
}
