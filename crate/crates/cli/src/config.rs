//! `key=value` configuration file.
//!
//! ```text
//! # comments and blank lines are ignored
//! cost_table=costs.json
//! voltage_map=volts.json
//! output_dir=out
//! ```
//!
//! Relative paths are resolved against the directory holding the config
//! file. A missing config file, or a missing file it points to, falls back
//! to the built-in defaults with a warning.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use mvq_core::{CostTable, VoltageMap};

use crate::Failure;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    pub cost_table: Option<PathBuf>,
    pub voltage_map: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

impl Config {
    pub fn parse(text: &str, base: &Path) -> Result<Config, Failure> {
        let mut cfg = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::usage(anyhow!("config line {}: expected key=value", idx + 1))
            })?;
            let path = Some(base.join(value.trim()));
            match key.trim() {
                "cost_table" => cfg.cost_table = path,
                "voltage_map" => cfg.voltage_map = path,
                "output_dir" => cfg.output_dir = path,
                other => {
                    return Err(Failure::usage(anyhow!(
                        "config line {}: unknown key `{other}`",
                        idx + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    /// Loads `path`, or the defaults if there is no such file.
    pub fn load(path: Option<&Path>, warn: &mut Vec<String>) -> Result<Config, Failure> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        match read_optional(path)? {
            Some(text) => Config::parse(&text, path.parent().unwrap_or(Path::new(""))),
            None => {
                warn.push(format!(
                    "config file {} not found; using defaults",
                    path.display()
                ));
                Ok(Config::default())
            }
        }
    }

    pub fn costs(&self, warn: &mut Vec<String>) -> Result<CostTable, Failure> {
        let Some(path) = &self.cost_table else {
            return Ok(CostTable::default());
        };
        match read_optional(path)? {
            Some(text) => CostTable::from_json(&text)
                .with_context(|| format!("cost table {}", path.display()))
                .map_err(Failure::usage),
            None => {
                warn.push(format!(
                    "cost table {} not found; using default costs",
                    path.display()
                ));
                Ok(CostTable::default())
            }
        }
    }

    pub fn voltages(&self, warn: &mut Vec<String>) -> Result<VoltageMap, Failure> {
        let Some(path) = &self.voltage_map else {
            return Ok(VoltageMap::default());
        };
        match read_optional(path)? {
            Some(text) => VoltageMap::from_json(&text)
                .with_context(|| format!("voltage map {}", path.display()))
                .map_err(Failure::usage),
            None => {
                warn.push(format!(
                    "voltage map {} not found; using default voltages",
                    path.display()
                ));
                Ok(VoltageMap::default())
            }
        }
    }

    /// Where a relative output file goes.
    pub fn output_path(&self, file: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if file.is_relative() => dir.join(file),
            _ => file.to_path_buf(),
        }
    }
}

fn read_optional(path: &Path) -> Result<Option<String>, Failure> {
    match fs::read_to_string(path) {
        Ok(text) => Ok(Some(text)),
        Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Failure::io(
            anyhow::Error::new(e).context(format!("reading {}", path.display())),
        )),
    }
}
