//! Run configuration shared by every subcommand.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub pair_bound: u64,
    pub pv_constant: f64,
    pub enumeration_cap: u64,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { pair_bound: 20, pv_constant: 1.0, enumeration_cap: 100_000_000, seed: 0, format: OutputFormat::Json }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pair_bound < 2 {
            return Err(Error::invalid(format!("pair bound {} must be at least 2", self.pair_bound)));
        }
        if !(self.pv_constant > 0.0 && self.pv_constant.is_finite()) {
            return Err(Error::invalid(format!("pv constant {} must be positive", self.pv_constant)));
        }
        if self.enumeration_cap < 10_000 {
            return Err(Error::invalid(format!("enumeration cap {} must be at least 10000", self.enumeration_cap)));
        }
        Ok(())
    }
}

/// Reads a plain `key = value` file. Blank lines and `#` comments are
/// skipped; keys are returned with `_` normalized to `-`.
pub fn read_key_values(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
    parse_key_values(&text)
}

pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| Error::invalid(format!("config line {}: expected key=value, got {line:?}", lineno + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::invalid(format!("config line {}: empty key", lineno + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}
