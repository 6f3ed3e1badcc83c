//! `key = value` configuration files.
//!
//! One entry per line; `#` starts a comment; blank lines are ignored. Keys are
//! case-sensitive, may contain letters, digits, `-` and `_`, and may appear
//! only once.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, key: Option<&str>, message: impl Into<String>) -> Self {
        Self { line: Some(line), key: key.map(str::to_string), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(key) = &self.key {
            write!(f, " (key `{key}`)")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: Vec<Entry>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(ConfigError::at(line, None, format!("expected `key = value`, found `{body}`")));
        };
        let (key, value) = (k.trim(), v.trim());
        if !valid_key(key) {
            return Err(ConfigError::at(line, None, format!("invalid key `{key}`")));
        }
        if value.is_empty() {
            return Err(ConfigError::at(line, Some(key), "missing value"));
        }
        if let Some(prev) = entries.iter().find(|e| e.key == key) {
            return Err(ConfigError::at(line, Some(key), format!("duplicate key, first set on line {}", prev.line)));
        }
        entries.push(Entry { key: key.to_string(), value: value.to_string(), line });
    }
    Ok(ConfigFile { entries })
}

impl ConfigFile {
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    /// Parses the value of `key`, if present.
    pub fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|err| ConfigError::at(e.line, Some(key), format!("cannot parse `{}`: {err}", e.value))),
        }
    }

    /// Parses a comma-separated list.
    pub fn parse_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some(e) = self.get(key) else { return Ok(None) };
        e.value
            .split(',')
            .map(|item| {
                let item = item.trim();
                item.parse::<T>()
                    .map_err(|err| ConfigError::at(e.line, Some(key), format!("cannot parse list item `{item}`: {err}")))
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    /// Fails on the first key not in `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        match self.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            None => Ok(()),
            Some(e) => Err(ConfigError::at(
                e.line,
                Some(&e.key),
                format!("unknown key (allowed: {})", allowed.join(", ")),
            )),
        }
    }
}
