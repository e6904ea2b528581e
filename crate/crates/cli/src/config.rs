//! Layered settings: command-line flag over config file over built-in
//! defaults. Config files are flat `key = value` lines using the flag names
//! without the leading dashes; `#` starts a comment.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

/// Every recognised key, in echo order.
pub const KEYS: [&str; 16] = [
    "k",
    "delta",
    "snr-db",
    "lambda-e-db",
    "sigma-d-db",
    "sigma-e-db",
    "rth",
    "scheme",
    "mode",
    "metric",
    "trials",
    "seed",
    "analytic",
    "check",
    "threads",
    "out",
];

/// Keys that steer execution but not results; never echoed into output.
const RUNTIME_KEYS: [&str; 3] = ["check", "threads", "out"];

/// Where a resolved value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Default,
    File { path: PathBuf, line: usize },
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => f.write_str("default"),
            Origin::File { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::Flag => f.write_str("command line"),
        }
    }
}

/// Keys a subcommand accepts, with their defaults. An empty default means the
/// key is optional and unset unless given.
#[derive(Debug, Clone, Copy)]
pub struct Profile {
    pub command: &'static str,
    pub defaults: &'static [(&'static str, &'static str)],
}

impl Profile {
    fn default_for(&self, key: &str) -> Option<&'static str> {
        self.defaults.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

/// Resolved settings for one command.
#[derive(Debug, Clone)]
pub struct Settings {
    command: &'static str,
    entries: Vec<(&'static str, String, Origin)>,
}

fn canonical(key: &str) -> Option<&'static str> {
    let key = key
        .trim()
        .trim_start_matches("--")
        .replace('_', "-")
        .to_ascii_lowercase();
    KEYS.iter().copied().find(|k| *k == key)
}

/// Parses config-file text into `(key, value, line)` triples.
pub fn parse_config(text: &str, path: &Path) -> Result<Vec<(&'static str, String, usize)>> {
    let err = |line: usize, message: String| CliError::Config {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut out: Vec<(&'static str, String, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(err(line, format!("expected `key = value`, found `{body}`")));
        };
        let Some(key) = canonical(key) else {
            return Err(err(line, format!("unknown key `{}`", key.trim())));
        };
        if let Some((_, _, first)) = out.iter().find(|(k, _, _)| *k == key) {
            return Err(err(line, format!("`{key}` already set on line {first}")));
        }
        out.push((key, value.trim().to_string(), line));
    }
    Ok(out)
}

impl Settings {
    /// Layers `flags` over the file at `config` (if any) over the profile's
    /// defaults. Keys outside the profile are rejected from either source.
    pub fn resolve(profile: &Profile, config: Option<&Path>, flags: &[(&'static str, String)]) -> Result<Self> {
        let file = match config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                parse_config(&text, path)?
            }
            None => Vec::new(),
        };
        for (key, _, line) in &file {
            if profile.default_for(key).is_none() {
                return Err(CliError::Config {
                    path: config.expect("file entries imply a path").to_path_buf(),
                    line: *line,
                    message: format!("`{key}` is not used by `{}`", profile.command),
                });
            }
        }
        for (key, _) in flags {
            if profile.default_for(key).is_none() {
                return Err(CliError::Usage(format!("--{key} is not used by `{}`", profile.command)));
            }
        }
        let mut entries = Vec::new();
        for key in KEYS {
            let Some(default) = profile.default_for(key) else {
                continue;
            };
            let resolved = if let Some((_, v)) = flags.iter().find(|(k, _)| *k == key) {
                (v.clone(), Origin::Flag)
            } else if let Some((_, v, line)) = file.iter().find(|(k, _, _)| *k == key) {
                let path = config.expect("file entries imply a path").to_path_buf();
                (v.clone(), Origin::File { path, line: *line })
            } else {
                (default.to_string(), Origin::Default)
            };
            entries.push((key, resolved.0, resolved.1));
        }
        Ok(Self {
            command: profile.command,
            entries,
        })
    }

    pub fn command(&self) -> &'static str {
        self.command
    }

    fn entry(&self, key: &str) -> Option<&(&'static str, String, Origin)> {
        self.entries.iter().find(|(k, _, _)| *k == key)
    }

    /// Raw value, `None` when the key is unset or not part of the profile.
    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entry(key).map(|(_, v, _)| v.as_str()).filter(|v| !v.is_empty())
    }

    /// Parses the value of `key`, attributing failures to its origin.
    pub fn parse<T>(&self, key: &'static str, f: impl FnOnce(&str) -> std::result::Result<T, String>) -> Result<T> {
        let (_, value, origin) = self.entry(key).ok_or_else(|| CliError::Value {
            key,
            origin: "internal".into(),
            message: format!("not defined for `{}`", self.command),
        })?;
        f(value).map_err(|message| CliError::Value {
            key,
            origin: origin.to_string(),
            message,
        })
    }

    /// `# key = value` lines for every setting that influences results.
    pub fn echo(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(k, _, _)| !RUNTIME_KEYS.contains(k))
            .map(|(k, v, _)| format!("# {k} = {v}"))
            .collect()
    }
}

pub fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" | "" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

pub fn parse_u64(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    // accept 1e6-style counts when they are exact integers
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(63) => Ok(v as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}
