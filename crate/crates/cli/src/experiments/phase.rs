use std::path::{Path, PathBuf};

use phasecycle::phase::{dynamical_phase, geometric_phase, AnalyticPath, BlochPath, Profile};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{unknown_parameter, Evaluation, Experiment};
use crate::error::{require, CliError, CliResult};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseParams {
    /// CSV with columns t, theta, phi and optionally energy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Profile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Profile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<Profile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

const SWEEPABLE: &[&str] = &[
    "duration",
    "theta.offset",
    "theta.drift",
    "theta.amplitude",
    "theta.frequency",
    "theta.phase",
    "phi.offset",
    "phi.drift",
    "phi.amplitude",
    "phi.frequency",
    "phi.phase",
    "energy.offset",
    "energy.drift",
    "energy.amplitude",
    "energy.frequency",
    "energy.phase",
];

impl PhaseParams {
    fn build(&self) -> CliResult<BlochPath> {
        let analytic = self.theta.is_some()
            || self.phi.is_some()
            || self.duration.is_some()
            || self.samples.is_some();
        match &self.path_file {
            Some(_) if analytic => Err(CliError::schema(
                "give either path_file or an analytic path (theta, phi, duration, samples), not both",
            )),
            Some(file) => {
                if self.energy.is_some() {
                    return Err(CliError::schema("an energy profile cannot be combined with path_file; add an energy column instead"));
                }
                read_path_file(file)
            }
            None => {
                let theta = self.theta.ok_or_else(|| CliError::schema("missing [params.theta] (or path_file)"))?;
                let phi = self.phi.ok_or_else(|| CliError::schema("missing [params.phi] (or path_file)"))?;
                let path = AnalyticPath {
                    theta,
                    phi,
                    energy: self.energy,
                    duration: require(self.duration, "duration")?,
                    samples: require(self.samples, "samples")?,
                };
                Ok(path.build()?)
            }
        }
    }
}

fn csv_error(file: &Path, line: u64, msg: impl std::fmt::Display) -> CliError {
    CliError::schema(format!("{} line {line}: {msg}", file.display()))
}

/// Reads `t, theta, phi[, energy]` rows. A leading header row naming those
/// columns is optional; `#` starts a comment line.
pub fn read_path_file(file: &Path) -> CliResult<BlochPath> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(file)
        .map_err(|e| CliError::schema(format!("cannot read {}: {e}", file.display())))?;
    let (mut times, mut thetas, mut phis, mut energies) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut width = None;
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::schema(format!("{}: {e}", file.display())))?;
        let line = record.position().map_or(0, |p| p.line());
        if index == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            let names: Vec<&str> = record.iter().collect();
            if names != ["t", "theta", "phi"] && names != ["t", "theta", "phi", "energy"] {
                return Err(csv_error(
                    file,
                    line,
                    "header must be `t,theta,phi` or `t,theta,phi,energy`",
                ));
            }
            width = Some(names.len());
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected || !(3..=4).contains(&record.len()) {
            return Err(csv_error(
                file,
                line,
                format!(
                    "expected {} columns, found {}",
                    expected.clamp(3, 4),
                    record.len()
                ),
            ));
        }
        let mut values = [0.0; 4];
        for (k, field) in record.iter().enumerate() {
            values[k] = field
                .parse()
                .map_err(|_| csv_error(file, line, format!("`{field}` is not a number")))?;
        }
        times.push(values[0]);
        thetas.push(values[1]);
        phis.push(values[2]);
        if expected == 4 {
            energies.push(values[3]);
        }
    }
    let energy = (width == Some(4)).then_some(energies);
    Ok(BlochPath::from_angles(&times, &thetas, &phis, energy)?)
}

pub struct Phase;

impl Experiment for Phase {
    const NAME: &'static str = "phase";
    type Params = PhaseParams;

    fn set(p: &mut PhaseParams, name: &str, value: f64) -> CliResult<()> {
        let unknown = || unknown_parameter(Self::NAME, name, SWEEPABLE);
        if name == "duration" {
            p.duration = Some(value);
            return Ok(());
        }
        let (profile, field) = name.split_once('.').ok_or_else(unknown)?;
        let slot = match profile {
            "theta" => &mut p.theta,
            "phi" => &mut p.phi,
            "energy" => &mut p.energy,
            _ => return Err(unknown()),
        };
        let prof = slot.as_mut().ok_or_else(|| {
            CliError::schema(format!(
                "cannot sweep `{name}` without a [params.{profile}] table"
            ))
        })?;
        match field {
            "offset" => prof.offset = value,
            "drift" => prof.drift = value,
            "amplitude" => prof.amplitude = value,
            "frequency" => prof.frequency = value,
            "phase" => prof.phase = value,
            _ => return Err(unknown()),
        }
        Ok(())
    }

    fn tolerances(_: &PhaseParams) -> Value {
        json!({
            "min_step_overlap": phasecycle::phase::MIN_STEP_OVERLAP,
            "analytic_refinement_overlap": phasecycle::phase::MIN_ANALYTIC_OVERLAP,
            "undefined_overlap": phasecycle::phase::UNDEFINED_OVERLAP,
        })
    }

    fn evaluate(p: &PhaseParams) -> CliResult<Evaluation> {
        let path = p.build()?;
        let r = geometric_phase(&path)?;
        let mut outputs = json!({
            "samples": path.len(),
            "total_geometric": r.total_geometric,
            "pancharatnam_term": r.pancharatnam_term,
            "connection_term": r.connection_term,
            "unwrapped": r.unwrapped,
            "error_estimate": r.error_estimate,
        });
        let mut columns = vec![
            ("total_geometric", r.total_geometric),
            ("pancharatnam_term", r.pancharatnam_term),
            ("connection_term", r.connection_term),
            ("unwrapped", r.unwrapped),
            ("error_estimate", r.error_estimate),
        ];
        if path.energy().is_some() {
            let d = dynamical_phase(&path)?;
            outputs["dynamical"] = json!(d.value);
            outputs["dynamical_error_estimate"] = json!(d.error_estimate);
            columns.push(("dynamical", d.value));
        }
        Ok(Evaluation { outputs, columns })
    }
}
