//! Experiment configuration: `key=value` files with `#` comments, overridden
//! by command-line flags.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::evolution::{REFERENCE_T1_US, REFERENCE_T2_US};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: malformed value `{value}` for `{key}`")]
    MalformedValue { line: usize, key: String, value: String },
    #[error("line {line}: expected `key=value`")]
    MissingSeparator { line: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Names accepted by `scenario=`.
pub const SCENARIO_CHOICES: [&str; 6] = ["ideal", "t1", "t2", "combined", "coherence", "all"];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    pub g: f64,
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: usize,
    pub t1_us: f64,
    pub t2_us: f64,
    /// µs of device time per simulation time unit.
    pub kappa: f64,
    pub scenario: String,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_qubits: 4,
            g: 1.0,
            t_end: 8.0 * PI,
            dt: 1e-3,
            sample_every: 10,
            t1_us: REFERENCE_T1_US,
            t2_us: REFERENCE_T2_US,
            kappa: 1.0,
            scenario: "all".into(),
            output_dir: PathBuf::from("out"),
            emit_svg: false,
        }
    }
}

/// Values given on the command line; `None` keeps the file or default value.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub n_qubits: Option<usize>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub kappa: Option<f64>,
    pub scenario: Option<String>,
    pub output_dir: Option<PathBuf>,
    pub emit_svg: Option<bool>,
}

/// Reals, optionally written as multiples of π: `8pi`, `0.5pi`, `pi`.
pub fn parse_real(text: &str) -> Option<f64> {
    let t = text.trim();
    let value = match t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        Some("") => PI,
        Some(coeff) => coeff.trim().parse::<f64>().ok()? * PI,
        None => t.parse::<f64>().ok()?,
    };
    value.is_finite().then_some(value)
}

fn parse_bool(text: &str) -> Option<bool> {
    match text {
        "true" | "1" | "yes" | "on" => Some(true),
        "false" | "0" | "no" | "off" => Some(false),
        _ => None,
    }
}

impl ExperimentConfig {
    /// Parses file contents on top of the defaults. Does not validate ranges.
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::MissingSeparator { line })?;
            config.set(line, key.trim(), value.trim())?;
        }
        Ok(config)
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        let malformed = || ConfigError::MalformedValue { line, key: key.to_string(), value: value.to_string() };
        let real = || parse_real(value).ok_or_else(malformed);
        let count = || value.parse::<usize>().map_err(|_| malformed());
        match key {
            "n_qubits" => self.n_qubits = count()?,
            "g" => self.g = real()?,
            "t_end" => self.t_end = real()?,
            "dt" => self.dt = real()?,
            "sample_every" => self.sample_every = count()?,
            "t1_us" => self.t1_us = real()?,
            "t2_us" => self.t2_us = real()?,
            "kappa" => self.kappa = real()?,
            "scenario" => {
                if !SCENARIO_CHOICES.contains(&value) {
                    return Err(malformed());
                }
                self.scenario = value.to_string();
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            "emit_svg" => self.emit_svg = parse_bool(value).ok_or_else(malformed)?,
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
        Ok(())
    }

    pub fn apply(&mut self, overrides: &ConfigOverrides) {
        if let Some(n) = overrides.n_qubits {
            self.n_qubits = n;
        }
        if let Some(t) = overrides.t_end {
            self.t_end = t;
        }
        if let Some(dt) = overrides.dt {
            self.dt = dt;
        }
        if let Some(k) = overrides.kappa {
            self.kappa = k;
        }
        if let Some(s) = &overrides.scenario {
            self.scenario = s.clone();
        }
        if let Some(dir) = &overrides.output_dir {
            self.output_dir = dir.clone();
        }
        if let Some(svg) = overrides.emit_svg {
            self.emit_svg = svg;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        if !(2..=10).contains(&self.n_qubits) {
            return invalid(format!("n_qubits must be in [2, 10], got {}", self.n_qubits));
        }
        if !(self.dt > 0.0 && self.dt <= 0.1) {
            return invalid(format!("dt must be in (0, 0.1], got {}", self.dt));
        }
        if !(self.t_end > 0.0) {
            return invalid(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.sample_every == 0 {
            return invalid("sample_every must be at least 1".into());
        }
        if !(self.g > 0.0) {
            return invalid(format!("g must be positive, got {}", self.g));
        }
        if !(self.t1_us > 0.0 && self.t2_us > 0.0) {
            return invalid(format!("coherence times must be positive (t1_us = {}, t2_us = {})", self.t1_us, self.t2_us));
        }
        if !(self.kappa > 0.0) {
            return invalid(format!("kappa must be positive, got {}", self.kappa));
        }
        if !SCENARIO_CHOICES.contains(&self.scenario.as_str()) {
            return invalid(format!("unknown scenario `{}`", self.scenario));
        }
        Ok(())
    }

    /// Spacing between stored samples.
    pub fn sample_spacing(&self) -> f64 {
        self.dt * self.sample_every as f64
    }

    /// Renders the configuration in the file format.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n_qubits={}", self.n_qubits);
        let _ = writeln!(s, "g={}", self.g);
        let _ = writeln!(s, "t_end={}", self.t_end);
        let _ = writeln!(s, "dt={}", self.dt);
        let _ = writeln!(s, "sample_every={}", self.sample_every);
        let _ = writeln!(s, "t1_us={}", self.t1_us);
        let _ = writeln!(s, "t2_us={}", self.t2_us);
        let _ = writeln!(s, "kappa={}", self.kappa);
        let _ = writeln!(s, "scenario={}", self.scenario);
        let _ = writeln!(s, "output_dir={}", self.output_dir.display());
        let _ = writeln!(s, "emit_svg={}", self.emit_svg);
        s
    }
}

/// Loads `path` (if any), applies the flag overrides and validates.
pub fn parse_config(path: Option<&Path>, overrides: &ConfigOverrides) -> crate::error::Result<ExperimentConfig> {
    let mut config = match path {
        Some(p) => ExperimentConfig::parse_str(&fs::read_to_string(p)?)?,
        None => ExperimentConfig::default(),
    };
    config.apply(overrides);
    config.validate()?;
    Ok(config)
}

/// Rewrites the `kappa=` line of a config file, appending one if absent.
/// Other lines, comments included, are kept as they are.
pub fn persist_kappa(path: &Path, kappa: f64) -> std::io::Result<()> {
    let text = if path.exists() { fs::read_to_string(path)? } else { String::new() };
    let mut out = String::new();
    let mut replaced = false;
    for line in text.lines() {
        let key = line.split('#').next().unwrap_or("").split('=').next().unwrap_or("").trim();
        if key == "kappa" && !replaced {
            let _ = writeln!(out, "kappa={kappa}");
            replaced = true;
        } else {
            out.push_str(line);
            out.push('\n');
        }
    }
    if !replaced {
        let _ = writeln!(out, "kappa={kappa}");
    }
    fs::write(path, out)
}
