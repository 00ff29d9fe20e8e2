//! Run configuration: built-in defaults, overridden by a `key = value` file,
//! overridden by command-line flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Normalization;
use crate::ranker::{Convergence, DampingSchedule, TeleportKind, DEFAULT_DAMPING};

/// Level cut points used when none are configured; the component size is always appended.
pub const DEFAULT_LEVELS: [usize; 6] = [30, 50, 100, 200, 300, 500];

/// Damping values compared side by side by the `compare` command.
pub const DEFAULT_COMPARE: [f64; 3] = [0.55, 0.15, 0.85];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Tsv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "tsv" => Ok(OutputFormat::Tsv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::Config(format!(
                "unknown output format {other:?} (expected csv, tsv or markdown)"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Tsv => "tsv",
            OutputFormat::Markdown => "markdown",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Damping for single-value commands (`rank`, `correlate`, `fit`, `deltas`).
    pub damping: f64,
    pub schedule: DampingSchedule,
    pub compare: DampingSchedule,
    pub convergence: Convergence,
    pub mode: Normalization,
    pub teleport: TeleportKind,
    /// Ascending cut points, excluding the component size.
    pub levels: Vec<usize>,
    pub format: OutputFormat,
    pub top_k: usize,
    pub bins: usize,
    /// Winners required by the prefix-recall report; all matched winners when unset.
    pub winner_count: Option<usize>,
    pub all_components: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            damping: DEFAULT_DAMPING,
            schedule: DampingSchedule::default(),
            compare: DampingSchedule::new(DEFAULT_COMPARE.to_vec()).expect("valid default"),
            convergence: Convergence::default(),
            mode: Normalization::default(),
            teleport: TeleportKind::default(),
            levels: DEFAULT_LEVELS.to_vec(),
            format: OutputFormat::default(),
            top_k: 20,
            bins: crate::stats::DEFAULT_LOG_BINS,
            winner_count: None,
            all_components: false,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

/// Comma-separated strictly ascending positive integers.
pub fn parse_levels(value: &str) -> Result<Vec<usize>> {
    let levels = value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_value::<usize>("levels", t))
        .collect::<Result<Vec<_>>>()?;
    if levels.contains(&0) || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "levels must be strictly ascending positive integers".into(),
        ));
    }
    Ok(levels)
}

fn schedule(key: &str, value: &str) -> Result<DampingSchedule> {
    value
        .parse::<DampingSchedule>()
        .map_err(|e| Error::Config(format!("{key}: {e}")))
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "damping" => self.set_damping(parse_value(key, value)?)?,
            "schedule" => self.schedule = schedule(key, value)?,
            "compare" => self.compare = schedule(key, value)?,
            "tolerance" => self.set_tolerance(parse_value(key, value)?)?,
            "max_iter" => self.convergence.max_iter = parse_value(key, value)?,
            "mode" => self.mode = value.parse()?,
            "teleport" => self.teleport = value.parse()?,
            "levels" => self.levels = parse_levels(value)?,
            "format" => self.format = value.parse()?,
            "top_k" => self.set_top_k(parse_value(key, value)?)?,
            "bins" => self.bins = parse_value(key, value)?,
            "winner_count" => self.winner_count = Some(parse_value(key, value)?),
            "all_components" => self.all_components = parse_bool(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn set_damping(&mut self, d: f64) -> Result<()> {
        if !(d.is_finite() && (0.0..1.0).contains(&d)) {
            return Err(Error::Config(format!("damping {d} must lie in [0, 1)")));
        }
        self.damping = d;
        Ok(())
    }

    pub fn set_tolerance(&mut self, tol: f64) -> Result<()> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::Config(format!("tolerance {tol} must be positive")));
        }
        self.convergence.tolerance = tol;
        Ok(())
    }

    pub fn set_top_k(&mut self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        self.top_k = k;
        Ok(())
    }

    /// Applies every setting of a config file's text.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_text(&text)
    }

    /// Obverse cut points for a component of `n` authors: configured cuts below `n`, then `n`.
    pub fn obverse_levels(&self, n: usize) -> Vec<usize> {
        let mut levels: Vec<usize> = self.levels.iter().copied().filter(|&k| k < n).collect();
        levels.push(n);
        levels
    }

    /// Reverse cut points: position 1 (the full ranking), then configured cuts below `n`.
    pub fn reverse_levels(&self, n: usize) -> Vec<usize> {
        let mut levels = vec![1];
        levels.extend(self.levels.iter().copied().filter(|&k| k > 1 && k < n));
        levels
    }
}
