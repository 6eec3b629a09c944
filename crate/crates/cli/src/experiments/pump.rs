use phasecycle::pump::{
    default_exact_tolerance, dynamic_charge, geometric_charge, integrate_exact, RateModulation,
    RateProtocol, MAX_PERIOD_ITERATIONS, PERIODIC_TOL, QUADRATURE_TOL,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{unknown_parameter, Evaluation, Experiment};
use crate::error::{require, CliError, CliResult};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpParams {
    /// Drive frequency Ω.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Periods averaged over once the periodic state is reached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periods: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare_exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_l_plus: Option<RateModulation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_r_plus: Option<RateModulation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_l_minus: Option<RateModulation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_r_minus: Option<RateModulation>,
}

const RATES: [&str; 4] = [
    "gamma_l_plus",
    "gamma_r_plus",
    "gamma_l_minus",
    "gamma_r_minus",
];
const SWEEPABLE: &[&str] = &[
    "omega",
    "gamma_l_plus.offset",
    "gamma_l_plus.amplitude",
    "gamma_l_plus.phase",
    "gamma_r_plus.offset",
    "gamma_r_plus.amplitude",
    "gamma_r_plus.phase",
    "gamma_l_minus.offset",
    "gamma_l_minus.amplitude",
    "gamma_l_minus.phase",
    "gamma_r_minus.offset",
    "gamma_r_minus.amplitude",
    "gamma_r_minus.phase",
];

impl PumpParams {
    fn rate_mut(&mut self, name: &str) -> Option<&mut Option<RateModulation>> {
        Some(match name {
            "gamma_l_plus" => &mut self.gamma_l_plus,
            "gamma_r_plus" => &mut self.gamma_r_plus,
            "gamma_l_minus" => &mut self.gamma_l_minus,
            "gamma_r_minus" => &mut self.gamma_r_minus,
            _ => return None,
        })
    }

    pub fn protocol(&self) -> CliResult<RateProtocol> {
        let rate = |m: Option<RateModulation>, key: &str| {
            m.ok_or_else(|| CliError::schema(format!("missing rate table [params.{key}]")))
        };
        Ok(RateProtocol::new(
            rate(self.gamma_l_plus, RATES[0])?,
            rate(self.gamma_r_plus, RATES[1])?,
            rate(self.gamma_l_minus, RATES[2])?,
            rate(self.gamma_r_minus, RATES[3])?,
            require(self.omega, "omega")?,
        )?)
    }
}

pub struct Pump;

impl Experiment for Pump {
    const NAME: &'static str = "pump";
    type Params = PumpParams;

    fn set(p: &mut PumpParams, name: &str, value: f64) -> CliResult<()> {
        if name == "omega" {
            p.omega = Some(value);
            return Ok(());
        }
        let unknown = || unknown_parameter(Self::NAME, name, SWEEPABLE);
        let (rate, field) = name.split_once('.').ok_or_else(unknown)?;
        let slot = p.rate_mut(rate).ok_or_else(unknown)?;
        let m = slot.as_mut().ok_or_else(|| {
            CliError::schema(format!(
                "cannot sweep `{name}` without a [params.{rate}] table"
            ))
        })?;
        match field {
            "offset" => m.offset = value,
            "amplitude" => m.amplitude = value,
            "phase" => m.phase = value,
            _ => return Err(unknown()),
        }
        Ok(())
    }

    fn tolerances(p: &PumpParams) -> Value {
        let mut t = json!({ "quadrature_abs": QUADRATURE_TOL });
        if p.compare_exact.unwrap_or(false) {
            t["ode"] = json!(default_exact_tolerance());
            t["periodic_state"] = json!(PERIODIC_TOL);
            t["max_period_iterations"] = json!(MAX_PERIOD_ITERATIONS);
        }
        t
    }

    fn evaluate(p: &PumpParams) -> CliResult<Evaluation> {
        let protocol = p.protocol()?;
        let dynamic = dynamic_charge(&protocol)?;
        let geometric = geometric_charge(&protocol)?;
        let mut outputs = json!({
            "period": protocol.period(),
            "mean_rate": protocol.mean_rate(),
            "dynamic": dynamic,
            "geometric": geometric,
        });
        let mut columns = Vec::with_capacity(4);
        if p.compare_exact.unwrap_or(false) {
            let periods = p.periods.unwrap_or(1);
            let exact = integrate_exact(&protocol, periods, &default_exact_tolerance())?;
            let n = exact.pumped;
            let residual_right = (n.n_right - dynamic.n_right - geometric.n_right).abs();
            let residual_left = (n.n_left - dynamic.n_left - geometric.n_left).abs();
            outputs["exact"] = json!({
                "pumped": n,
                "final_state": { "p0": exact.final_state.p0, "p1": exact.final_state.p1 },
                "period_map_iterations": exact.period_map_iterations,
                "periods_averaged": periods,
            });
            outputs["residual"] = json!({ "right": residual_right, "left": residual_left });
            columns.push(("n_exact", n.n_right));
            columns.push(("n_dyn", dynamic.n_right));
            columns.push(("n_geom", geometric.n_right));
            columns.push(("residual", residual_right));
        } else {
            columns.push(("n_dyn", dynamic.n_right));
            columns.push(("n_geom", geometric.n_right));
        }
        Ok(Evaluation { outputs, columns })
    }
}
