//! Scenario registry: each experiment is a [`Scenario`] trait object looked
//! up by name.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::thread;

use crate::error::{Error, Result};
use crate::metrics::PeakReport;

use super::config::ExperimentConfig;
use super::output::{csv_string, svg_string, Series};
use super::pipeline::{coherence_run, ideal_run, master_run, NoiseChannels, COHERENCE_PROBE};

/// What a scenario computes, before anything is written.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    /// (file stem, series); one CSV per entry.
    pub series: Vec<(String, Series)>,
    pub peaks: Option<PeakReport>,
    /// Named summary values, in report order.
    pub scalars: Vec<(String, f64)>,
    /// Set when some sample needed eigenvalue clipping.
    pub partial: bool,
}

pub trait Scenario: Send + Sync {
    fn name(&self) -> &str;
    fn description(&self) -> &str;
    fn y_label(&self) -> &str {
        "fidelity"
    }
    fn compute(&self, config: &ExperimentConfig) -> Result<ScenarioOutput>;
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub label: String,
    pub csv_paths: Vec<PathBuf>,
    pub svg_path: Option<PathBuf>,
    pub series: Vec<Series>,
    pub peaks: Option<PeakReport>,
    pub scalars: Vec<(String, f64)>,
    pub partial: bool,
}

impl ScenarioResult {
    pub fn scalar(&self, key: &str) -> Option<f64> {
        self.scalars.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn first_peak(&self) -> Option<f64> {
        self.scalar("first_peak")
    }

    pub fn fourth_peak(&self) -> Option<f64> {
        self.scalar("fourth_peak")
    }

    pub fn half_life(&self) -> Option<f64> {
        self.scalar("half_life")
    }
}

fn peak_scalars(peaks: &PeakReport, scalars: &mut Vec<(String, f64)>) {
    if let Some((_, v)) = peaks.revival(0) {
        scalars.push(("first_peak".into(), v));
    }
    if let Some((_, v)) = peaks.revival(3) {
        scalars.push(("fourth_peak".into(), v));
    }
}

pub struct IdealScenario;

impl Scenario for IdealScenario {
    fn name(&self) -> &str {
        "ideal"
    }

    fn description(&self) -> &str {
        "noise-free evolution, fidelity to the cluster state"
    }

    fn compute(&self, config: &ExperimentConfig) -> Result<ScenarioOutput> {
        let run = ideal_run(config)?;
        let mut scalars = Vec::new();
        peak_scalars(&run.peaks, &mut scalars);
        scalars.push(("trough_0".into(), run.fidelity[0]));
        if config.t_end >= 2.0 * PI {
            scalars.push(("trough_2pi".into(), run.fidelity_at(2.0 * PI)?));
        }
        Ok(ScenarioOutput {
            series: vec![("ideal".into(), Series::new("ideal", run.times, run.fidelity))],
            peaks: Some(run.peaks),
            scalars,
            partial: false,
        })
    }
}

/// Master-equation run under one noise channel set at the configured κ.
pub struct NoisyScenario {
    name: &'static str,
    description: &'static str,
    channels: NoiseChannels,
}

impl NoisyScenario {
    pub const fn new(name: &'static str, description: &'static str, channels: NoiseChannels) -> Self {
        Self { name, description, channels }
    }
}

impl Scenario for NoisyScenario {
    fn name(&self) -> &str {
        self.name
    }

    fn description(&self) -> &str {
        self.description
    }

    fn compute(&self, config: &ExperimentConfig) -> Result<ScenarioOutput> {
        let run = master_run(config, self.channels, config.kappa, config.t_end)?;
        let peaks = run.peaks()?;
        let mut scalars = Vec::new();
        peak_scalars(&peaks, &mut scalars);
        scalars.push(("trough_0".into(), run.fidelity[0]));
        if config.t_end >= 2.0 * PI {
            scalars.push(("trough_2pi".into(), run.fidelity_at(2.0 * PI)?));
        }
        let diag = run.diagnostics();
        scalars.push(("psd_repairs".into(), diag.psd_repairs as f64));
        scalars.push(("max_trace_drift".into(), diag.max_trace_drift));
        let times = run.trajectory.times.clone();
        Ok(ScenarioOutput {
            series: vec![(self.name.into(), Series::new(self.name, times, run.fidelity))],
            peaks: Some(peaks),
            scalars,
            partial: diag.psd_repairs > 0,
        })
    }
}

/// Free decay of ℓ1 coherence after preparing the state at t = π, for the
/// combined and the relaxation-only models.
pub struct CoherenceScenario;

impl Scenario for CoherenceScenario {
    fn name(&self) -> &str {
        "coherence"
    }

    fn description(&self) -> &str {
        "normalized l1 coherence after switching the interaction off at t = pi"
    }

    fn y_label(&self) -> &str {
        "C(t)/C(π)"
    }

    fn compute(&self, config: &ExperimentConfig) -> Result<ScenarioOutput> {
        let combined = coherence_run(config, NoiseChannels::Combined, config.kappa)?;
        let relaxation = coherence_run(config, NoiseChannels::Relaxation, config.kappa)?;
        let mut scalars = Vec::new();
        if let Some(h) = combined.half_life() {
            scalars.push(("half_life".into(), h));
        }
        if let Some(h) = relaxation.half_life() {
            scalars.push(("half_life_t1".into(), h));
        }
        if let Some(c) = combined.retention_at(COHERENCE_PROBE) {
            scalars.push(("retention_15".into(), c));
        }
        if let Some(c) = relaxation.retention_at(COHERENCE_PROBE) {
            scalars.push(("retention_15_t1".into(), c));
        }
        let partial = combined.diagnostics.psd_repairs + relaxation.diagnostics.psd_repairs > 0;
        Ok(ScenarioOutput {
            series: vec![
                ("coherence_combined".into(), Series::new("combined", combined.times, combined.normalized)),
                ("coherence_t1".into(), Series::new("t1", relaxation.times, relaxation.normalized)),
            ],
            peaks: None,
            scalars,
            partial,
        })
    }
}

#[derive(Default)]
pub struct ScenarioRegistry {
    scenarios: Vec<Box<dyn Scenario>>,
}

impl ScenarioRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// ideal, t1, t2, combined, coherence.
    pub fn with_defaults() -> Self {
        let mut r = Self::new();
        r.register(Box::new(IdealScenario));
        r.register(Box::new(NoisyScenario::new("t1", "relaxation only", NoiseChannels::Relaxation)));
        r.register(Box::new(NoisyScenario::new("t2", "pure dephasing only", NoiseChannels::Dephasing)));
        r.register(Box::new(NoisyScenario::new("combined", "relaxation and dephasing", NoiseChannels::Combined)));
        r.register(Box::new(CoherenceScenario));
        r
    }

    /// Replaces any scenario already registered under the same name.
    pub fn register(&mut self, scenario: Box<dyn Scenario>) {
        match self.scenarios.iter().position(|s| s.name() == scenario.name()) {
            Some(i) => self.scenarios[i] = scenario,
            None => self.scenarios.push(scenario),
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn Scenario> {
        self.scenarios.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        self.scenarios.iter().map(|s| s.name()).collect()
    }

    pub fn run(&self, name: &str, config: &ExperimentConfig) -> Result<ScenarioResult> {
        let scenario = self
            .get(name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario `{name}` (have {})", self.names().join(", "))))?;
        config.validate()?;
        let output = scenario.compute(config)?;
        write_output(scenario, output, config)
    }

    /// Runs every registered scenario concurrently. Failures are collected
    /// rather than stopping the others.
    pub fn run_all(&self, config: &ExperimentConfig) -> Result<RunAllReport> {
        config.validate()?;
        fs::create_dir_all(&config.output_dir)?;
        let outcomes: Vec<(String, Result<ScenarioResult>)> = thread::scope(|scope| {
            let handles: Vec<_> = self
                .scenarios
                .iter()
                .map(|s| {
                    let name = s.name().to_string();
                    (name, scope.spawn(move || s.compute(config).and_then(|out| write_output(s.as_ref(), out, config))))
                })
                .collect();
            handles
                .into_iter()
                .map(|(name, h)| {
                    let result = h
                        .join()
                        .unwrap_or_else(|_| Err(Error::InvalidState(format!("scenario `{name}` panicked"))));
                    (name, result)
                })
                .collect()
        });
        let mut results = Vec::new();
        let mut failures = Vec::new();
        for (name, outcome) in outcomes {
            match outcome {
                Ok(r) => results.push(r),
                Err(e) => failures.push((name, e)),
            }
        }
        let summary_path = config.output_dir.join("summary.txt");
        fs::write(&summary_path, summary_table(config, &results, &failures))?;
        Ok(RunAllReport { results, failures, summary_path })
    }
}

fn write_output(scenario: &dyn Scenario, output: ScenarioOutput, config: &ExperimentConfig) -> Result<ScenarioResult> {
    fs::create_dir_all(&config.output_dir)?;
    let mut csv_paths = Vec::new();
    let mut series = Vec::new();
    for (stem, s) in output.series {
        let path = config.output_dir.join(format!("{stem}.csv"));
        fs::write(&path, csv_string(&s.times, &s.values)?)?;
        csv_paths.push(path);
        series.push(s);
    }
    let svg_path = if config.emit_svg {
        let path = config.output_dir.join(format!("{}.svg", scenario.name()));
        fs::write(&path, svg_string(&series, scenario.y_label())?)?;
        Some(path)
    } else {
        None
    };
    Ok(ScenarioResult {
        label: scenario.name().to_string(),
        csv_paths,
        svg_path,
        series,
        peaks: output.peaks,
        scalars: output.scalars,
        partial: output.partial,
    })
}

/// Runs one scenario from the default registry.
pub fn run_scenario(config: &ExperimentConfig, name: &str) -> Result<ScenarioResult> {
    ScenarioRegistry::with_defaults().run(name, config)
}

#[derive(Debug)]
pub struct RunAllReport {
    pub results: Vec<ScenarioResult>,
    pub failures: Vec<(String, Error)>,
    pub summary_path: PathBuf,
}

impl RunAllReport {
    pub fn get(&self, label: &str) -> Option<&ScenarioResult> {
        self.results.iter().find(|r| r.label == label)
    }

    pub fn csv_paths(&self) -> Vec<&PathBuf> {
        self.results.iter().flat_map(|r| &r.csv_paths).collect()
    }
}

/// All five default scenarios; see [`ScenarioRegistry::run_all`].
pub fn run_all(config: &ExperimentConfig) -> Result<RunAllReport> {
    ScenarioRegistry::with_defaults().run_all(config)
}

pub fn summary_table(config: &ExperimentConfig, results: &[ScenarioResult], failures: &[(String, Error)]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "n_qubits={} g={} kappa={} dt={} sample_every={} t_end={}",
        config.n_qubits, config.g, config.kappa, config.dt, config.sample_every, config.t_end
    );
    for r in results {
        let _ = writeln!(s, "\n[{}]{}", r.label, if r.partial { " partial" } else { "" });
        if let Some(peaks) = &r.peaks {
            let _ = writeln!(s, "peaks:");
            for k in 0..peaks.len() {
                let _ = writeln!(
                    s,
                    "  t={:.9} (expected {:.9}) F={:.12}",
                    peaks.peak_times[k], peaks.expected_times[k], peaks.peak_values[k]
                );
            }
        }
        for (key, value) in &r.scalars {
            let _ = writeln!(s, "{key}={value}");
        }
    }
    for (name, e) in failures {
        let _ = writeln!(s, "\n[{name}] failed: {e}");
    }
    s
}
