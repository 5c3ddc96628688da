use std::collections::BTreeMap;

use serde::Serialize;

/// A computed bound with its components and the hypotheses that were checked.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundRecord {
    pub inputs_hash: String,
    pub bound: f64,
    pub components: BTreeMap<String, f64>,
    pub hypothesis_flags: BTreeMap<String, bool>,
}

impl BoundRecord {
    pub fn new(bound: f64) -> Self {
        Self { bound, ..Self::default() }
    }

    pub fn component(mut self, name: &str, value: f64) -> Self {
        self.components.insert(name.to_string(), value);
        self
    }

    pub fn flag(mut self, name: &str, value: bool) -> Self {
        self.hypothesis_flags.insert(name.to_string(), value);
        self
    }

    pub fn with_hash(mut self, hash: impl Into<String>) -> Self {
        self.inputs_hash = hash.into();
        self
    }
}
