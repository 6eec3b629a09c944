//! One module per experiment family. Each exposes a `Params` table that is
//! filled from the config file and command-line flags, and an `evaluate`
//! that turns a complete table into outputs.

pub mod carnot;
pub mod otto;
pub mod phase;
pub mod pump;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Outputs of one evaluation: the structured report section and the flat
/// numeric columns used for CSV.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub outputs: Value,
    pub columns: Vec<(&'static str, f64)>,
}

pub trait Experiment {
    const NAME: &'static str;
    type Params: Serialize + DeserializeOwned + Default + Clone + Send + Sync;

    /// Assigns a swept value. Names outside the schema are rejected.
    fn set(params: &mut Self::Params, name: &str, value: f64) -> CliResult<()>;

    /// Numerical settings reported alongside the outputs.
    fn tolerances(params: &Self::Params) -> Value;

    fn evaluate(params: &Self::Params) -> CliResult<Evaluation>;
}

pub(crate) fn unknown_parameter(experiment: &str, name: &str, known: &[&str]) -> CliError {
    CliError::schema(format!(
        "`{name}` is not a sweepable {experiment} parameter (expected one of: {})",
        known.join(", ")
    ))
}
