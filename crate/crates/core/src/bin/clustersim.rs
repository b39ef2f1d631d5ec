use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cluster_core::experiment::{
    parse_config, persist_kappa, run_all, run_scenario, verify_suite, ConfigOverrides, ExperimentConfig,
    ScenarioResult,
};
use cluster_core::metrics::calibrate_kappa;
use cluster_core::Error;

#[derive(Debug, Parser)]
#[command(name = "clustersim", version, about = "Cluster-state generation on charge-qubit chains")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Flags {
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    n_qubits: Option<usize>,
    /// accepts multiples of pi, e.g. 8pi
    #[arg(long, global = true, value_parser = parse_time)]
    t_end: Option<f64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// µs per simulation time unit
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// also write SVG plots
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario: ideal, t1, t2, combined or coherence
    Run {
        #[arg(long)]
        scenario: String,
    },
    /// Run all five scenarios and write summary.txt
    RunAll,
    /// Fit kappa so the combined-noise first revival reaches the target
    Calibrate {
        #[arg(long, default_value_t = 0.85)]
        target: f64,
    },
    /// Check propagators, target states, stabilizers and Hamiltonian forms
    Verify,
}

fn parse_time(s: &str) -> Result<f64, String> {
    cluster_core::experiment::config::parse_real(s).ok_or_else(|| format!("not a number: {s}"))
}

impl Flags {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            n_qubits: self.n_qubits,
            t_end: self.t_end,
            dt: self.dt,
            kappa: self.kappa,
            scenario: None,
            output_dir: self.out.clone(),
            emit_svg: self.svg.then_some(true),
        }
    }
}

fn print_result(r: &ScenarioResult) {
    println!("[{}]{}", r.label, if r.partial { " (partial: PSD repairs applied)" } else { "" });
    if let Some(peaks) = &r.peaks {
        for k in 0..peaks.len() {
            println!("  peak t = {:.6}  F = {:.9}", peaks.peak_times[k], peaks.peak_values[k]);
        }
    }
    for (key, value) in &r.scalars {
        println!("  {key} = {value}");
    }
    for path in &r.csv_paths {
        println!("  wrote {}", path.display());
    }
    if let Some(path) = &r.svg_path {
        println!("  wrote {}", path.display());
    }
}

fn execute(cli: &Cli) -> Result<(), Error> {
    let config: ExperimentConfig = parse_config(cli.flags.config.as_deref(), &cli.flags.overrides())?;
    match &cli.command {
        Command::Run { scenario } => {
            let result = run_scenario(&config, scenario)?;
            print_result(&result);
        }
        Command::RunAll => {
            let report = run_all(&config)?;
            for r in &report.results {
                print_result(r);
            }
            println!("wrote {}", report.summary_path.display());
            if let Some((name, err)) = report.failures.into_iter().next() {
                eprintln!("scenario {name} failed");
                return Err(err);
            }
        }
        Command::Calibrate { target } => {
            let cal = calibrate_kappa(*target, &config)?;
            println!("kappa={}", cal.kappa);
            println!("first_peak={}", cal.first_peak);
            let path = match &cli.flags.config {
                Some(p) => p.clone(),
                None => {
                    std::fs::create_dir_all(&config.output_dir)?;
                    config.output_dir.join("calibrated.conf")
                }
            };
            persist_kappa(&path, cal.kappa)?;
            println!("saved to {}", path.display());
        }
        Command::Verify => {
            let checks = verify_suite(config.n_qubits.clamp(2, 6))?;
            let mut failed = 0;
            for c in &checks {
                println!(
                    "{} n={} {}: worst {:e} (tol {:e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.n_qubits,
                    c.name,
                    c.worst,
                    c.tolerance
                );
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                return Err(Error::InvalidState(format!("{failed} verification checks failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
