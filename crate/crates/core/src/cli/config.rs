//! Flat `key = value` configuration with `#` comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// A problem with user input, always tied to one key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub msg: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, msg: impl Into<String>) -> Self {
        ConfigError {
            key: key.into(),
            msg: msg.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`: {}", self.key, self.msg)
    }
}

impl std::error::Error for ConfigError {}

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;

/// Canonical key spelling: lowercase with underscores.
pub fn canonical(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Parsed parameters of one run, from a config file and/or flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> ConfigResult<RunConfig> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::new(
                    format!("line {}", i + 1),
                    format!("expected `key = value`, found `{line}`"),
                ));
            };
            let key = canonical(k);
            let value = v.trim();
            if key.is_empty() {
                return Err(ConfigError::new(format!("line {}", i + 1), "missing key"));
            }
            if value.is_empty() {
                return Err(ConfigError::new(key, "missing value"));
            }
            if values.insert(key.clone(), value.to_string()).is_some() {
                return Err(ConfigError::new(key, "given more than once"));
            }
        }
        Ok(RunConfig { values })
    }

    pub fn load(path: &Path) -> ConfigResult<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    /// Set or override a value.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(canonical(key), value.into());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// Reject any key outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> ConfigResult<()> {
        match self.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(ConfigError::new(k, "unknown key for this subcommand")),
            None => Ok(()),
        }
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> ConfigResult<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.str(key)
            .map(|v| v.parse::<T>().map_err(|e| ConfigError::new(key, format!("cannot parse `{v}`: {e}"))))
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> ConfigResult<T>
    where
        T::Err: fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> ConfigResult<T>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?.ok_or_else(|| ConfigError::new(key, "required"))
    }

    /// Finite real strictly above zero.
    pub fn positive(&self, key: &str, default: Option<f64>) -> ConfigResult<f64> {
        let v = match default {
            Some(d) => self.get_or(key, d)?,
            None => self.require(key)?,
        };
        if !(v > 0.0 && v.is_finite()) {
            return Err(ConfigError::new(key, format!("must be a finite positive number, got {v}")));
        }
        Ok(v)
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> ConfigResult<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        let Some(raw) = self.str(key) else {
            return Ok(None);
        };
        raw.split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<T>().map_err(|e| ConfigError::new(key, format!("cannot parse `{s}`: {e}")))
            })
            .collect::<ConfigResult<Vec<T>>>()
            .map(Some)
    }
}
