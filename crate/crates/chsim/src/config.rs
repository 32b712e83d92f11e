//! Flat `key = value` run configuration files.
//!
//! Lines are `key = value`, `#` starts a comment, blank lines are ignored.
//! Unknown and duplicate keys are rejected with the offending line number.
//!
//! ```text
//! # breaking experiment
//! family = A
//! amplitude = 1.0
//! k = 0.0
//! n = 1025
//! t_end = 0.5
//! ```
//!
//! Required: `family`, `amplitude`, `k`, `n`, `t_end`. Optional (defaults in
//! parentheses): `cfl` (0.3), `dt_max` (1e-3), `dt_min` (1e-12),
//! `blowup_threshold` (1e3), `rhs_form` (u_form), `record_stride` (10),
//! `monitor_x0` (0.5).

use std::collections::HashMap;
use std::path::Path;

use crate::dynamics::SimConfig;
use crate::error::{Error, Result};
use crate::initial_data::{Family, InitialDataSpec};

const KNOWN_KEYS: [&str; 12] = [
    "family",
    "amplitude",
    "k",
    "n",
    "t_end",
    "cfl",
    "dt_max",
    "dt_min",
    "blowup_threshold",
    "rhs_form",
    "record_stride",
    "monitor_x0",
];

pub fn parse_config(path: impl AsRef<Path>) -> Result<SimConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<SimConfig> {
    let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(format!(
                "line {lineno}: expected `key = value`, got {line:?}"
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::config(format!("line {lineno}: unknown key {key:?}")));
        }
        if entries.insert(key, (lineno, value)).is_some() {
            return Err(Error::config(format!(
                "line {lineno}: duplicate key {key:?}"
            )));
        }
    }

    fn required<'a>(
        entries: &HashMap<&str, (usize, &'a str)>,
        key: &str,
    ) -> Result<(usize, &'a str)> {
        entries
            .get(key)
            .copied()
            .ok_or_else(|| Error::config(format!("missing required key {key:?}")))
    }

    fn parse<T: std::str::FromStr>(key: &str, lineno: usize, value: &str) -> Result<T> {
        value.parse().map_err(|_| {
            Error::config(format!(
                "line {lineno}: key {key:?} has invalid value {value:?}"
            ))
        })
    }

    fn optional<T: std::str::FromStr>(
        entries: &HashMap<&str, (usize, &str)>,
        key: &str,
        default: T,
    ) -> Result<T> {
        match entries.get(key) {
            Some(&(lineno, value)) => parse(key, lineno, value),
            None => Ok(default),
        }
    }

    let (ln, v) = required(&entries, "family")?;
    let family: Family = parse("family", ln, v)?;
    let (ln, v) = required(&entries, "amplitude")?;
    let amplitude: f64 = parse("amplitude", ln, v)?;
    let (ln, v) = required(&entries, "k")?;
    let k: f64 = parse("k", ln, v)?;
    let (ln, v) = required(&entries, "n")?;
    let n: usize = parse("n", ln, v)?;
    let (ln, v) = required(&entries, "t_end")?;
    let t_end: f64 = parse("t_end", ln, v)?;

    let mut cfg = SimConfig::new(InitialDataSpec::family(family, amplitude), n, k, t_end);
    cfg.cfl = optional(&entries, "cfl", cfg.cfl)?;
    cfg.dt_max = optional(&entries, "dt_max", cfg.dt_max)?;
    cfg.dt_min = optional(&entries, "dt_min", cfg.dt_min)?;
    cfg.blowup_threshold = optional(&entries, "blowup_threshold", cfg.blowup_threshold)?;
    cfg.rhs_form = optional(&entries, "rhs_form", cfg.rhs_form)?;
    cfg.record_stride = optional(&entries, "record_stride", cfg.record_stride)?;
    cfg.monitor_x0 = optional(&entries, "monitor_x0", cfg.monitor_x0)?;

    cfg.validate()?;
    Ok(cfg)
}
