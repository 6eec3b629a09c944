use phasecycle::otto::{cycle, OttoSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{unknown_parameter, Evaluation, Experiment};
use crate::error::{require, CliResult};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OttoParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_cold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_hot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
}

const SWEEPABLE: &[&str] = &["omega1", "omega2", "t_cold", "t_hot", "hbar"];

pub struct Otto;

impl Experiment for Otto {
    const NAME: &'static str = "otto";
    type Params = OttoParams;

    fn set(p: &mut OttoParams, name: &str, value: f64) -> CliResult<()> {
        let slot = match name {
            "omega1" => &mut p.omega1,
            "omega2" => &mut p.omega2,
            "t_cold" => &mut p.t_cold,
            "t_hot" => &mut p.t_hot,
            "hbar" => &mut p.hbar,
            _ => return Err(unknown_parameter(Self::NAME, name, SWEEPABLE)),
        };
        *slot = Some(value);
        Ok(())
    }

    fn tolerances(_: &OttoParams) -> Value {
        json!({ "method": "closed form" })
    }

    fn evaluate(p: &OttoParams) -> CliResult<Evaluation> {
        let t_cold = require(p.t_cold, "t_cold")?;
        let t_hot = require(p.t_hot, "t_hot")?;
        let base = OttoSpec::from_temperatures(
            require(p.omega1, "omega1")?,
            require(p.omega2, "omega2")?,
            t_cold,
            t_hot,
        )?;
        let spec = OttoSpec::with_hbar(
            base.omega1,
            base.omega2,
            base.beta_cold,
            base.beta_hot,
            p.hbar.unwrap_or(1.0),
        )?;
        let r = cycle(&spec)?;
        let carnot = 1.0 - t_cold / t_hot;
        Ok(Evaluation {
            outputs: json!({
                "beta_cold": spec.beta_cold,
                "beta_hot": spec.beta_hot,
                "w1": r.w1,
                "q2": r.q2,
                "w3": r.w3,
                "q4": r.q4,
                "w_net_extracted": r.w_net_extracted,
                "efficiency": r.efficiency,
                "carnot_efficiency": carnot,
            }),
            columns: vec![
                ("w1", r.w1),
                ("q2", r.q2),
                ("w3", r.w3),
                ("q4", r.q4),
                ("w_net_extracted", r.w_net_extracted),
                ("efficiency", r.efficiency),
            ],
        })
    }
}
