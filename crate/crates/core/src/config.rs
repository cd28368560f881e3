//! Run configuration: defaults, an optional `key=value` file, then command-line overrides.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(ConfigError::BadValue("output".into(), other.into())),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {0}: expected `key = value`")]
    Syntax(usize),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{0}`: `{1}`")]
    BadValue(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub sample_count: usize,
    pub max_n: usize,
    pub max_degree: u32,
    pub hbar_order: usize,
    pub output: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            sample_count: 20,
            max_n: 5,
            max_degree: 3,
            hbar_order: 6,
            output: OutputFormat::Json,
        }
    }
}

/// Every field optional; used for both the file layer and the flag layer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub sample_count: Option<usize>,
    pub max_n: Option<usize>,
    pub max_degree: Option<u32>,
    pub hbar_order: Option<usize>,
    pub output: Option<OutputFormat>,
}

fn parse_field<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::BadValue(key.into(), value.into()))
}

impl ConfigOverrides {
    /// Parses `key = value` lines; `#` starts a comment. Keys accept `-` or `_`.
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let mut out = ConfigOverrides::default();
        for (i, line) in src.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
            let (k, v) = (k.trim().replace('-', "_"), v.trim());
            match k.as_str() {
                "seed" => out.seed = Some(parse_field(&k, v)?),
                "sample_count" | "samples" => out.sample_count = Some(parse_field(&k, v)?),
                "max_n" | "n" => out.max_n = Some(parse_field(&k, v)?),
                "max_degree" => out.max_degree = Some(parse_field(&k, v)?),
                "hbar_order" => out.hbar_order = Some(parse_field(&k, v)?),
                "output" => out.output = Some(v.parse()?),
                _ => return Err(ConfigError::UnknownKey(k)),
            }
        }
        Ok(out)
    }

    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.sample_count {
            cfg.sample_count = v;
        }
        if let Some(v) = self.max_n {
            cfg.max_n = v;
        }
        if let Some(v) = self.max_degree {
            cfg.max_degree = v;
        }
        if let Some(v) = self.hbar_order {
            cfg.hbar_order = v;
        }
        if let Some(v) = self.output {
            cfg.output = v;
        }
    }
}

impl RunConfig {
    /// Defaults, then the file layer, then the flag layer.
    pub fn layered(file: Option<&ConfigOverrides>, flags: &ConfigOverrides) -> RunConfig {
        let mut cfg = RunConfig::default();
        if let Some(f) = file {
            f.apply(&mut cfg);
        }
        flags.apply(&mut cfg);
        cfg
    }
}
