//! Flat `key = value` parameter files.
//!
//! Keys mirror the long flag names (`omega-b`, `gamma2`, `rel-tol`, ...), with `_`
//! accepted in place of `-`. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const KEYS: &[&str] = &[
    "omega-b",
    "gamma1",
    "gamma2",
    "omega-c",
    "phi",
    "omega-drive",
    "t1",
    "t2",
    "tbar",
    "dt-rel",
    "rel-tol",
    "abs-tol",
    "threads",
    "seed",
    "format",
    "out",
];

pub type Config = BTreeMap<String, String>;

pub fn parse(text: &str) -> Result<Config> {
    let mut out = Config::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "line {}: expected `key = value`, got `{}`",
                i + 1,
                raw.trim()
            );
        };
        let key = key.trim().replace('_', "-").to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            bail!("line {}: unknown key `{key}`", i + 1);
        }
        let value = value.trim().trim_matches('"').to_owned();
        if value.is_empty() {
            bail!("line {}: empty value for `{key}`", i + 1);
        }
        if out.insert(key.clone(), value).is_some() {
            bail!("line {}: duplicate key `{key}`", i + 1);
        }
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    parse(&text).with_context(|| format!("in config file {}", path.display()))
}

pub fn get_f64(cfg: &Config, key: &str) -> Result<Option<f64>> {
    cfg.get(key)
        .map(|v| {
            v.parse::<f64>()
                .with_context(|| format!("config key `{key}`: `{v}` is not a number"))
        })
        .transpose()
}
