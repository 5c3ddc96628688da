//! Flat `key = value` configuration with `[section]` headers.
//!
//! Keys before any header, or under `[common]`, apply to every command; keys
//! under a section named after a command apply to that command only. Values
//! given on the command line replace file values.

use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::CliError;

/// Resolved settings for one command run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<String, String>,
}

/// Parses config text, keeping the keys that apply to `command`.
pub fn parse_config(text: &str, command: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut common = BTreeMap::new();
    let mut specific = BTreeMap::new();
    let mut section = String::from("common");
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::validation(format!("config line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if k.is_empty() {
            return Err(CliError::validation(format!("config line {}: empty key", i + 1)));
        }
        if section == "common" {
            common.insert(k, v);
        } else if section == command {
            specific.insert(k, v);
        }
    }
    common.extend(specific);
    Ok(common)
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), values: BTreeMap::new() }
    }

    /// Loads the applicable keys of a config file.
    pub fn load(command: &str, path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
        Ok(Self { command: command.to_string(), values: parse_config(&text, command)? })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|s| parse_f64(key, s)).transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.get(key) {
            Some(s) => s.trim().parse().map_err(|_| CliError::validation(format!("{key}: expected a nonnegative integer, got '{s}'"))),
            None => Ok(default),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, CliError> {
        Ok(self.usize_or(key, default as usize)? as u64)
    }

    /// Comma-separated list of floats; must be nonempty when present.
    pub fn f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(s) => {
                let out: Vec<f64> = s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_f64(key, t)).collect::<Result<_, _>>()?;
                if out.is_empty() {
                    return Err(CliError::validation(format!("{key}: list is empty")));
                }
                Ok(out)
            }
        }
    }

    /// `k=v,k=v` pairs of floats.
    pub fn params(&self, key: &str) -> Result<BTreeMap<String, f64>, CliError> {
        let mut out = BTreeMap::new();
        if let Some(s) = self.get(key) {
            for pair in s.split(',').filter(|t| !t.trim().is_empty()) {
                let (k, v) = pair.split_once('=').ok_or_else(|| CliError::validation(format!("{key}: expected k=v, got '{pair}'")))?;
                out.insert(k.trim().to_string(), parse_f64(k.trim(), v)?);
            }
        }
        Ok(out)
    }

    /// SHA-256 over the command and the sorted key/value pairs, output path excluded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.command.as_bytes());
        for (k, v) in self.values.iter().filter(|(k, _)| k.as_str() != "out") {
            h.update(b"\n");
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn parse_f64(key: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::validation(format!("{key}: expected a number, got '{}'", s.trim())))?;
    if !v.is_finite() {
        return Err(CliError::validation(format!("{key}: value must be finite")));
    }
    Ok(v)
}
