//! `phasecycle`: batch runs of the heat-engine, pump and phase models with
//! JSON or CSV output.

mod config;
mod error;
mod experiments;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig, SweepConfig};
use error::{CliError, CliResult};
use experiments::carnot::{Carnot, CarnotMode};
use experiments::otto::Otto;
use experiments::phase::Phase;
use experiments::pump::Pump;
use experiments::Experiment;

#[derive(Parser)]
#[command(
    name = "phasecycle",
    version,
    about = "Quantum heat engines, stochastic pumps and geometric phases"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; command-line flags override its [params]
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format (default: csv for sweeps, json otherwise)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Harmonic-oscillator Otto cycle
    Otto(OttoArgs),
    /// Spin-1/2 Carnot cycle
    Carnot {
        #[command(subcommand)]
        verb: CarnotVerb,
    },
    /// Periodically driven two-state pump
    Pump(PumpArgs),
    /// Geometric and dynamical phase of a Bloch-sphere path
    Phase(PhaseArgs),
    /// Run whatever experiment the config file names
    Run,
}

#[derive(Args)]
struct OttoArgs {
    #[arg(long)]
    omega1: Option<f64>,
    #[arg(long)]
    omega2: Option<f64>,
    #[arg(long)]
    t_cold: Option<f64>,
    #[arg(long)]
    t_hot: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
}

#[derive(Subcommand)]
enum CarnotVerb {
    /// Reversible cycle from the hot-isotherm fields
    Cycle(CarnotCycleArgs),
    /// Contact durations maximizing low-dissipation power
    MaximizePower(CarnotPowerArgs),
}

#[derive(Args)]
struct CarnotCycleArgs {
    #[arg(long)]
    omega_t1: Option<f64>,
    #[arg(long)]
    omega_t2: Option<f64>,
    #[arg(long)]
    t_hot: Option<f64>,
    #[arg(long)]
    t_cold: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
}

#[derive(Args)]
struct CarnotPowerArgs {
    #[arg(long)]
    t_hot: Option<f64>,
    #[arg(long)]
    t_cold: Option<f64>,
    #[arg(long)]
    ds: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
}

#[derive(Args)]
struct PumpArgs {
    /// Drive frequency
    #[arg(long)]
    omega: Option<f64>,
    /// Periods averaged in the periodic state
    #[arg(long)]
    periods: Option<usize>,
    /// Also integrate the master equation and report the residual
    #[arg(long)]
    compare_exact: bool,
    /// Log-spaced drive-frequency sweep
    #[arg(long, value_name = "START,STOP,COUNT")]
    omega_sweep: Option<String>,
}

#[derive(Args)]
struct PhaseArgs {
    /// CSV path with columns t, theta, phi and optionally energy
    #[arg(long, value_name = "CSV")]
    path_file: Option<PathBuf>,
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
}

fn override_with<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}

fn load_or_empty<P: serde::de::DeserializeOwned + Default>(
    common: &Common,
    name: &str,
) -> CliResult<RunConfig<P>> {
    match &common.config {
        Some(path) => config::load(path, name),
        None => Ok(RunConfig::empty(name)),
    }
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io)?;
            stdout.flush().map_err(io)
        }
    }
}

fn execute<E: Experiment>(
    config: RunConfig<E::Params>,
    sweep_flag: Option<SweepConfig>,
    common: &Common,
) -> CliResult<()> {
    let sweep = sweep_flag.or(config.sweep);
    let format = common
        .format
        .or(config.output.format)
        .unwrap_or(if sweep.is_some() {
            Format::Csv
        } else {
            Format::Json
        });
    let out = common.out.clone().or(config.output.path);
    let outcome = report::run::<E>(&config.params, sweep)?;
    let text = report::render::<E>(&config.params, &outcome, format)?;
    emit(&text, out.as_deref())
}

/// Resolves a relative `path_file` against the config file's directory.
fn anchor_path_file(params: &mut experiments::phase::PhaseParams, config: Option<&Path>) {
    if let (Some(file), Some(cfg)) = (&params.path_file, config) {
        if file.is_relative() {
            let dir = cfg.parent().unwrap_or(Path::new("."));
            params.path_file = Some(dir.join(file));
        }
    }
}

fn dispatch(cli: &Cli) -> (String, CliResult<()>) {
    let common = &cli.common;
    match &cli.command {
        Command::Otto(a) => (Otto::NAME.into(), run_otto(common, a)),
        Command::Carnot { verb } => (Carnot::NAME.into(), run_carnot(common, verb)),
        Command::Pump(a) => (Pump::NAME.into(), run_pump(common, a)),
        Command::Phase(a) => (Phase::NAME.into(), run_phase(common, a)),
        Command::Run => {
            let Some(path) = &common.config else {
                return (
                    "unknown".into(),
                    Err(CliError::schema("`run` needs --config")),
                );
            };
            let name = match config::experiment_of(path) {
                Ok(name) => name,
                Err(e) => return ("unknown".into(), Err(e)),
            };
            let result = match name.as_str() {
                "otto" => config::load(path, "otto").and_then(|c| execute::<Otto>(c, None, common)),
                "carnot" => {
                    config::load(path, "carnot").and_then(|c| execute::<Carnot>(c, None, common))
                }
                "pump" => config::load(path, "pump").and_then(|c| execute::<Pump>(c, None, common)),
                "phase" => config::load(path, "phase").and_then(|mut c: RunConfig<_>| {
                    anchor_path_file(&mut c.params, Some(path));
                    execute::<Phase>(c, None, common)
                }),
                other => Err(CliError::schema(format!(
                    "{}: unknown experiment `{other}` (expected otto, carnot, pump or phase)",
                    path.display()
                ))),
            };
            (name, result)
        }
    }
}

fn run_otto(common: &Common, a: &OttoArgs) -> CliResult<()> {
    let mut c = load_or_empty::<experiments::otto::OttoParams>(common, Otto::NAME)?;
    override_with(&mut c.params.omega1, a.omega1);
    override_with(&mut c.params.omega2, a.omega2);
    override_with(&mut c.params.t_cold, a.t_cold);
    override_with(&mut c.params.t_hot, a.t_hot);
    override_with(&mut c.params.hbar, a.hbar);
    execute::<Otto>(c, None, common)
}

fn run_carnot(common: &Common, verb: &CarnotVerb) -> CliResult<()> {
    let mut c = load_or_empty::<experiments::carnot::CarnotParams>(common, Carnot::NAME)?;
    let p = &mut c.params;
    match verb {
        CarnotVerb::Cycle(a) => {
            p.mode = Some(CarnotMode::Cycle);
            override_with(&mut p.omega_t1, a.omega_t1);
            override_with(&mut p.omega_t2, a.omega_t2);
            override_with(&mut p.t_hot, a.t_hot);
            override_with(&mut p.t_cold, a.t_cold);
            override_with(&mut p.hbar, a.hbar);
        }
        CarnotVerb::MaximizePower(a) => {
            p.mode = Some(CarnotMode::MaximizePower);
            override_with(&mut p.t_hot, a.t_hot);
            override_with(&mut p.t_cold, a.t_cold);
            override_with(&mut p.ds, a.ds);
            override_with(&mut p.c1, a.c1);
            override_with(&mut p.c2, a.c2);
        }
    }
    execute::<Carnot>(c, None, common)
}

fn run_pump(common: &Common, a: &PumpArgs) -> CliResult<()> {
    let mut c = load_or_empty::<experiments::pump::PumpParams>(common, Pump::NAME)?;
    override_with(&mut c.params.omega, a.omega);
    override_with(&mut c.params.periods, a.periods);
    if a.compare_exact {
        c.params.compare_exact = Some(true);
    }
    let sweep = a
        .omega_sweep
        .as_deref()
        .map(|s| SweepConfig::parse_triplet("omega", s))
        .transpose()?;
    execute::<Pump>(c, sweep, common)
}

fn run_phase(common: &Common, a: &PhaseArgs) -> CliResult<()> {
    let mut c = load_or_empty::<experiments::phase::PhaseParams>(common, Phase::NAME)?;
    anchor_path_file(&mut c.params, common.config.as_deref());
    override_with(&mut c.params.path_file, a.path_file.clone());
    override_with(&mut c.params.duration, a.duration);
    override_with(&mut c.params.samples, a.samples);
    execute::<Phase>(c, None, common)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, result) = dispatch(&cli);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phasecycle: {e}");
            if matches!(e, CliError::Numerical(_)) {
                print!("{}", report::render_error(&experiment, &e));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
