//! Flat key/value configuration files with `[section]` headers.
//!
//! ```text
//! # comment
//! [run]
//! scenario = simulate
//! seed = 7
//!
//! [grid]
//! geometry = hyperbolic
//! r_max = 30
//! n = 4096
//! ```
//!
//! Every key must be consumed by the scenario that loads the file; unknown
//! keys (and unknown sections) are rejected before execution starts.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::from("run");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| anyhow!("line {}: unterminated section header", lineno + 1))?;
                current = name.trim().to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            let section = sections.entry(current.clone()).or_default();
            if section.insert(key.clone(), value).is_some() {
                bail!("line {}: duplicate key `{key}` in section `{current}`", lineno + 1);
            }
        }
        Ok(Config { sections })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn reader(&self) -> ConfigReader<'_> {
        ConfigReader { config: self, consumed: BTreeSet::new() }
    }
}

/// Tracks key consumption so that leftovers can be rejected.
pub struct ConfigReader<'a> {
    config: &'a Config,
    consumed: BTreeSet<(String, String)>,
}

impl ConfigReader<'_> {
    fn raw(&mut self, section: &str, key: &str) -> Option<&str> {
        let value = self.config.sections.get(section)?.get(key)?;
        self.consumed.insert((section.to_string(), key.to_string()));
        Some(value.as_str())
    }

    pub fn string(&mut self, section: &str, key: &str, default: &str) -> String {
        self.raw(section, key).unwrap_or(default).to_string()
    }

    pub fn f64(&mut self, section: &str, key: &str, default: f64) -> Result<f64> {
        match self.raw(section, key) {
            None => Ok(default),
            Some(v) => v.parse().with_context(|| format!("[{section}] {key}: not a number: `{v}`")),
        }
    }

    pub fn usize(&mut self, section: &str, key: &str, default: usize) -> Result<usize> {
        match self.raw(section, key) {
            None => Ok(default),
            Some(v) => v.parse().with_context(|| format!("[{section}] {key}: not an integer: `{v}`")),
        }
    }

    pub fn u64(&mut self, section: &str, key: &str, default: u64) -> Result<u64> {
        match self.raw(section, key) {
            None => Ok(default),
            Some(v) => v.parse().with_context(|| format!("[{section}] {key}: not an integer: `{v}`")),
        }
    }

    pub fn bool(&mut self, section: &str, key: &str, default: bool) -> Result<bool> {
        match self.raw(section, key) {
            None => Ok(default),
            Some("on") | Some("true") | Some("yes") | Some("1") => Ok(true),
            Some("off") | Some("false") | Some("no") | Some("0") => Ok(false),
            Some(v) => bail!("[{section}] {key}: expected on/off, got `{v}`"),
        }
    }

    pub fn f64_list(&mut self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.raw(section, key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<f64>().with_context(|| format!("[{section}] {key}: bad entry `{s}`")))
                .collect(),
        }
    }

    /// Errors if any key in the file has not been consumed so far; scenarios
    /// call this after reading their parameters and before doing work.
    pub fn ensure_consumed(&self) -> Result<()> {
        for (section, keys) in &self.config.sections {
            for key in keys.keys() {
                if !self.consumed.contains(&(section.clone(), key.clone())) {
                    bail!("unknown key `{key}` in section `[{section}]`");
                }
            }
        }
        Ok(())
    }

    /// Errors if any key in the file was never consumed.
    pub fn finish(self) -> Result<()> {
        self.ensure_consumed()
    }
}
