//! `--config` files: a JSON object whose keys are long flag names. Keys in a
//! section named after the subcommand override top-level keys; flags given
//! on the command line override both.

use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::Usage;

#[derive(Debug, Default)]
pub struct Config {
    values: Map<String, Value>,
}

impl Config {
    pub fn load(path: Option<&Path>, subcommand: &str) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let root: Value = serde_json::from_str(&text)
            .map_err(|e| Usage(format!("config {}: {e}", path.display())))?;
        let Value::Object(root) = root else {
            return Err(Usage("config must be a JSON object".into()).into());
        };
        let mut values: Map<String, Value> = root.clone();
        if let Some(Value::Object(section)) = root.get(subcommand) {
            for (k, v) in section {
                values.insert(k.clone(), v.clone());
            }
        }
        Ok(Config { values })
    }

    pub fn raw(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| Usage(format!("config key {key:?}: {e}")).into()),
        }
    }

    /// `flag`, else the config value, else `default`.
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    pub fn pick_opt<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
