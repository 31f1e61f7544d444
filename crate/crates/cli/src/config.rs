//! Layered settings: defaults, then an optional `key = value` file, then
//! `INFLUENCE_*` environment variables, then command-line flags.

use std::path::{Path, PathBuf};

use influence_core::solver::DEFAULT_NODE_LIMIT;
use influence_core::{Error, Result};

pub const ENV_PREFIX: &str = "INFLUENCE_";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub node_limit: u64,
    pub threads: usize,
    pub cache_dir: Option<PathBuf>,
    pub symmetry_budget: u64,
    pub tree_limit: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            node_limit: DEFAULT_NODE_LIMIT,
            threads: 1,
            cache_dir: default_cache_dir(),
            symmetry_budget: 10_000_000,
            tree_limit: influence_core::cgt::DEFAULT_TREE_LIMIT,
        }
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME").filter(|x| !x.is_empty()) {
        return Some(PathBuf::from(x).join("influence"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("influence"))
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::InvalidArgument(format!("bad value {value:?} for setting {key}"));
        match key {
            "node_limit" => self.node_limit = value.parse().map_err(|_| bad())?,
            "threads" => {
                self.threads = value.parse().map_err(|_| bad())?;
                if self.threads == 0 {
                    return Err(bad());
                }
            }
            "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
            "symmetry_budget" => self.symmetry_budget = value.parse().map_err(|_| bad())?,
            "tree_limit" => self.tree_limit = value.parse().map_err(|_| bad())?,
            _ => return Err(Error::InvalidArgument(format!("unknown setting {key:?}"))),
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
            let value = value.trim().trim_matches('"');
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn apply_env(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<()> {
        for (name, value) in vars {
            let Some(key) = name.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            if key == "CONFIG" {
                continue;
            }
            self.set(&key.to_ascii_lowercase(), &value)?;
        }
        Ok(())
    }
}
