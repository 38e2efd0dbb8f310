//! Run configuration: a JSON file, overridden by flags and `key=value` pairs.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Keys accepted both at the top level and among `key=value` parameters.
const SETTINGS: [&str; 4] = ["m", "t", "n", "seed"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Option<String>,
    /// Grid intervals.
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_t")]
    pub t: f64,
    /// Monte Carlo sample count.
    #[serde(default = "default_n")]
    pub n: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub params: Map<String, Value>,
}

fn default_m() -> usize {
    256
}

fn default_t() -> f64 {
    1.0
}

fn default_n() -> u64 {
    100_000
}

fn default_seed() -> u64 {
    1
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            m: default_m(),
            t: default_t(),
            n: default_n(),
            seed: default_seed(),
            params: Map::new(),
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    /// Merges `key=value` pairs; values are JSON, else plain strings.
    pub fn apply_pairs(&mut self, pairs: &[String]) -> Result<(), ConfigError> {
        for pair in pairs {
            let Some((key, raw)) = pair.split_once('=') else {
                return Err(ConfigError(format!("expected key=value, got `{pair}`")));
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError(format!("empty key in `{pair}`")));
            }
            let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            if SETTINGS.contains(&key) {
                self.set(key, value)?;
            } else {
                self.params.insert(key.to_string(), value);
            }
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: Value) -> Result<(), ConfigError> {
        let bad = |e: serde_json::Error| ConfigError(format!("`{key}`: {e}"));
        match key {
            "m" => self.m = serde_json::from_value(value).map_err(bad)?,
            "t" => self.t = serde_json::from_value(value).map_err(bad)?,
            "n" => self.n = serde_json::from_value(value).map_err(bad)?,
            _ => self.seed = serde_json::from_value(value).map_err(bad)?,
        }
        Ok(())
    }

    /// Decodes the command parameters into their typed form.
    pub fn typed<T: serde::de::DeserializeOwned>(&self) -> Result<T, ConfigError> {
        serde_json::from_value(Value::Object(self.params.clone())).map_err(|e| {
            ConfigError(format!(
                "invalid parameters for `{}`: {e}",
                self.command.as_deref().unwrap_or("?")
            ))
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m < 2 {
            return Err(ConfigError(format!("m must be at least 2, got {}", self.m)));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(ConfigError(format!("t must be positive and finite, got {}", self.t)));
        }
        if self.n == 0 {
            return Err(ConfigError("n must be positive".into()));
        }
        Ok(())
    }
}
