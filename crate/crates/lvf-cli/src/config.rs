//! Layered configuration for `verify`: compiled-in suite defaults, then
//! the config file (`--config` flag, falling back to the path named by
//! `LVF_CONFIG`), then command-line flags. Exact rational knobs are
//! written as strings `"p/q"`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use lvf_core::scalar::Rational;
use lvf_core::suites::SuiteConfig;
use serde::Deserialize;

/// Environment variable naming the default config file.
pub const CONFIG_ENV_VAR: &str = "LVF_CONFIG";

/// A float knob that may be written as a TOML float, an integer, or an
/// exact rational string `"p/q"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Int(i64),
    Exact(String),
}

impl Number {
    pub fn resolve(&self) -> anyhow::Result<f64> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Int(n) => Ok(*n as f64),
            Number::Exact(s) => parse_number(s),
        }
    }
}

/// Parses `"p/q"` exactly through the rational parser, or falls back to
/// a plain float literal.
pub fn parse_number(s: &str) -> anyhow::Result<f64> {
    let s = s.trim();
    if s.contains('/') {
        let r: Rational = s.parse().with_context(|| format!("invalid rational `{s}`"))?;
        return Ok(r.to_f64());
    }
    s.parse::<f64>().with_context(|| format!("invalid number `{s}`"))
}

/// The knobs a config file (or one of its per-suite sections) may set.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub window: Option<i64>,
    pub instances: Option<usize>,
    pub n: Option<usize>,
    pub max_exp: Option<i64>,
    pub quadrature_nodes: Option<usize>,
    pub flow_time: Option<Number>,
    pub flow_tolerance: Option<Number>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut SuiteConfig) -> anyhow::Result<()> {
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.window {
            cfg.window = v;
        }
        if let Some(v) = self.instances {
            cfg.instances = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.max_exp {
            cfg.max_exp = v;
        }
        if let Some(v) = self.quadrature_nodes {
            cfg.quadrature_nodes = v;
        }
        if let Some(v) = &self.flow_time {
            cfg.flow_time = v.resolve()?;
        }
        if let Some(v) = &self.flow_tolerance {
            cfg.flow_tolerance = v.resolve()?;
        }
        Ok(())
    }
}

/// Top-level defaults plus `[suites.<name>]` sections.
#[derive(Debug, Default)]
pub struct FileConfig {
    pub base: Overrides,
    pub suites: BTreeMap<String, Overrides>,
}

pub fn load(path: &Path) -> anyhow::Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut table: toml::Table =
        text.parse().with_context(|| format!("invalid TOML in {}", path.display()))?;
    let suites = match table.remove("suites") {
        Some(value) => value
            .try_into::<BTreeMap<String, Overrides>>()
            .with_context(|| format!("invalid [suites] sections in {}", path.display()))?,
        None => BTreeMap::new(),
    };
    let base: Overrides = toml::Value::Table(table)
        .try_into()
        .with_context(|| format!("invalid keys in {}", path.display()))?;
    Ok(FileConfig { base, suites })
}

/// Applies the config file named by `--config` or `LVF_CONFIG`, if any:
/// top-level defaults first, then the section matching the suite.
pub fn apply_file(cfg: &mut SuiteConfig, explicit: Option<&Path>) -> anyhow::Result<()> {
    let path: Option<PathBuf> = match explicit {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from),
    };
    let Some(path) = path else {
        return Ok(());
    };
    let file = load(&path)?;
    file.base.apply(cfg)?;
    if let Some(section) = file.suites.get(&cfg.suite) {
        section.apply(cfg)?;
    }
    Ok(())
}
