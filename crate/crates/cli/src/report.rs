use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Format, SweepConfig};
use crate::error::{CliError, CliResult};
use crate::experiments::{Evaluation, Experiment};

pub const SCHEMA_VERSION: u32 = 1;

pub enum Outcome {
    Single(Evaluation),
    Sweep {
        sweep: SweepConfig,
        points: Vec<(f64, Evaluation)>,
    },
}

/// Evaluates every sweep point independently; results come back in sweep
/// order whatever order they finish in. The first failing point (by index)
/// aborts the run.
pub fn run<E: Experiment>(params: &E::Params, sweep: Option<SweepConfig>) -> CliResult<Outcome> {
    let Some(sweep) = sweep else {
        return Ok(Outcome::Single(E::evaluate(params)?));
    };
    sweep.validate()?;
    E::set(&mut params.clone(), &sweep.parameter, sweep.start)?;
    let points = sweep
        .values()
        .into_par_iter()
        .map(|v| {
            let mut p = params.clone();
            E::set(&mut p, &sweep.parameter, v)?;
            E::evaluate(&p).map(|e| (v, e))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Outcome::Sweep { sweep, points })
}

fn header<E: Experiment>(params: &E::Params) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "conventions": phasecycle::CONVENTIONS_VERSION,
        "experiment": E::NAME,
        "inputs": params,
        "tolerances": E::tolerances(params),
    })
}

pub fn render<E: Experiment>(
    params: &E::Params,
    outcome: &Outcome,
    format: Format,
) -> CliResult<String> {
    match format {
        Format::Json => Ok(render_json::<E>(params, outcome)),
        Format::Csv => render_csv(outcome),
    }
}

fn render_json<E: Experiment>(params: &E::Params, outcome: &Outcome) -> String {
    let mut report = header::<E>(params);
    match outcome {
        Outcome::Single(e) => report["outputs"] = e.outputs.clone(),
        Outcome::Sweep { sweep, points } => {
            report["sweep"] = json!(sweep);
            report["points"] = points
                .iter()
                .map(|(v, e)| json!({ "value": v, "outputs": e.outputs }))
                .collect();
        }
    }
    let mut text = serde_json::to_string_pretty(&report).expect("report is serializable");
    text.push('\n');
    text
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn render_csv(outcome: &Outcome) -> CliResult<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let rows: Vec<(Option<f64>, &Evaluation)> = match outcome {
        Outcome::Single(e) => vec![(None, e)],
        Outcome::Sweep { points, .. } => points.iter().map(|(v, e)| (Some(*v), e)).collect(),
    };
    let mut head: Vec<&str> = Vec::new();
    if let Outcome::Sweep { sweep, .. } = outcome {
        head.push(&sweep.parameter);
    }
    head.extend(rows[0].1.columns.iter().map(|(name, _)| *name));
    let io = |e: csv::Error| CliError::Io(e.to_string());
    writer.write_record(&head).map_err(io)?;
    for (value, e) in rows {
        let mut record = Vec::with_capacity(head.len());
        for (name, x) in value
            .map(|v| ("sweep value", v))
            .into_iter()
            .chain(e.columns.iter().copied())
        {
            if !x.is_finite() {
                return Err(CliError::Numerical(phasecycle::Error::Convergence(
                    format!("output `{name}` is not finite ({x})"),
                )));
            }
            record.push(format_number(x));
        }
        writer.write_record(&record).map_err(io)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Machine-readable description of a failed run.
pub fn render_error(experiment: &str, error: &CliError) -> String {
    let body = match error {
        CliError::Numerical(e) => {
            let mut v = json!(e);
            v["message"] = json!(e.to_string());
            v
        }
        CliError::Schema(msg) => json!({ "kind": "schema", "message": msg }),
        CliError::Io(msg) => json!({ "kind": "io", "message": msg }),
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "conventions": phasecycle::CONVENTIONS_VERSION,
        "experiment": experiment,
        "error": body,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("error is serializable");
    text.push('\n');
    text
}
