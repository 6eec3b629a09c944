use serde::Serialize;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested parameters do not describe a heat engine. `net_work`
    /// is the extracted work per cycle; its sign tells which way the cycle
    /// runs.
    #[error("not an engine: {reason} (net extracted work {net_work:e})")]
    NotAnEngine { reason: String, net_work: f64 },

    #[error("degenerate generator: stationary state is not unique")]
    DegenerateGenerator,

    #[error("integration failed at t = {t} after {steps} steps: {reason}")]
    IntegrationFailure {
        reason: String,
        t: f64,
        state: Vec<f64>,
        steps: usize,
    },

    #[error("no interior maximum: {0}")]
    NoInteriorMaximum(String),

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("phase undefined: overlap magnitude {overlap:e} is zero")]
    UndefinedPhase { overlap: f64 },

    #[error("path needs refinement: {0}")]
    Refinement(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NotAnEngine { .. } => "not_an_engine",
            Error::DegenerateGenerator => "degenerate_generator",
            Error::IntegrationFailure { .. } => "integration_failure",
            Error::NoInteriorMaximum(_) => "no_interior_maximum",
            Error::Convergence(_) => "convergence",
            Error::UndefinedPhase { .. } => "undefined_phase",
            Error::Refinement(_) => "refinement",
        }
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}

pub(crate) fn ensure_non_negative(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!(
            "{name} must be finite and >= 0, got {value}"
        )))
    }
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_variant_serializes_with_its_kind() {
        let all = [
            Error::Domain("x".into()),
            Error::NotAnEngine {
                reason: "r".into(),
                net_work: -1.0,
            },
            Error::DegenerateGenerator,
            Error::IntegrationFailure {
                reason: "r".into(),
                t: 1.0,
                state: vec![0.5],
                steps: 3,
            },
            Error::NoInteriorMaximum("x".into()),
            Error::Convergence("x".into()),
            Error::UndefinedPhase { overlap: 0.0 },
            Error::Refinement("x".into()),
        ];
        for e in all {
            let v = serde_json::to_value(&e).unwrap();
            assert_eq!(v["kind"], e.kind());
        }
    }
}
