//! Flat `key = value` configuration files with `[section]` headers.
//!
//! Chosen over long flag lists so a run's configuration can be archived
//! next to its outputs. Lines starting with `#` or `;` are comments; keys
//! are looked up as `section.key`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
    source: String,
}

impl Config {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                section = line[1..line.len() - 1].trim().to_string();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    path: source.to_string(),
                    line: lineno + 1,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            let full_key = if section.is_empty() {
                key.trim().to_string()
            } else {
                format!("{section}.{}", key.trim())
            };
            values.insert(full_key, value.trim().to_string());
        }
        Ok(Self {
            values,
            source: source.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::config(format!("missing key `{key}` in {}", self.source)))
    }

    pub fn get_opt(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        let raw = self.get(key)?;
        raw.parse::<f64>().map_err(|_| {
            Error::config(format!(
                "key `{key}` in {} is not a number: `{raw}`",
                self.source
            ))
        })
    }

    pub fn get_f64_opt(&self, key: &str) -> Result<Option<f64>> {
        match self.get_opt(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<f64>().map(Some).map_err(|_| {
                Error::config(format!(
                    "key `{key}` in {} is not a number: `{raw}`",
                    self.source
                ))
            }),
        }
    }

    pub fn get_usize_opt(&self, key: &str) -> Result<Option<usize>> {
        match self.get_opt(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<usize>().map(Some).map_err(|_| {
                Error::config(format!(
                    "key `{key}` in {} is not an integer: `{raw}`",
                    self.source
                ))
            }),
        }
    }

    pub fn get_u64_opt(&self, key: &str) -> Result<Option<u64>> {
        match self.get_opt(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<u64>().map(Some).map_err(|_| {
                Error::config(format!(
                    "key `{key}` in {} is not an integer: `{raw}`",
                    self.source
                ))
            }),
        }
    }
}
