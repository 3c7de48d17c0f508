//! `key=value` option files named by `FINSUM_CONFIG`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const CONFIG_ENV: &str = "FINSUM_CONFIG";

/// Keys accepted in a config file; they mirror the `eval` flags.
pub const KEYS: [&str; 8] = ["expr", "n", "method", "alpha", "variant", "beta", "tol", "format"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got `{line}`", i + 1);
            };
            let key = key.trim().trim_start_matches("--");
            if !KEYS.contains(&key) {
                bail!("line {}: unknown key `{key}` (known: {})", i + 1, KEYS.join(", "));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// The file named by `FINSUM_CONFIG`, or an empty config when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `flag` if given, else the config value, else `None`.
    pub fn pick(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.get(key).map(str::to_string))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let c = Config::parse("# comment\nexpr = 1/k^2\n\nn=10\n--tol=1e-9\n").unwrap();
        assert_eq!(c.get("expr"), Some("1/k^2"));
        assert_eq!(c.get("tol"), Some("1e-9"));
        assert_eq!(c.pick(Some("20".into()), "n").as_deref(), Some("20"));
        assert_eq!(c.pick(None, "n").as_deref(), Some("10"));
        assert_eq!(c.pick(None, "alpha"), None);
    }

    #[test]
    fn rejects_junk() {
        assert!(Config::parse("expr 1/k").is_err());
        assert!(Config::parse("colour=red").is_err());
    }
}
