use phasecycle::carnot::{
    default_power_tolerance, irreversible_heats, maximize_power, reversible_cycle, solve_adiabats,
    LowDissipationParams,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{unknown_parameter, Evaluation, Experiment};
use crate::error::{require, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarnotMode {
    Cycle,
    MaximizePower,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarnotParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<CarnotMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_hot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_cold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_t2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
}

const CYCLE_KEYS: &[&str] = &["t_hot", "t_cold", "omega_t1", "omega_t2", "hbar"];
const POWER_KEYS: &[&str] = &["t_hot", "t_cold", "ds", "c1", "c2"];

impl CarnotParams {
    fn mode(&self) -> CliResult<CarnotMode> {
        self.mode.ok_or_else(|| {
            CliError::schema("missing parameter `mode`: use `carnot cycle`, `carnot maximize-power` or set mode under [params]")
        })
    }

    fn slot(&mut self, name: &str) -> Option<&mut Option<f64>> {
        Some(match name {
            "t_hot" => &mut self.t_hot,
            "t_cold" => &mut self.t_cold,
            "omega_t1" => &mut self.omega_t1,
            "omega_t2" => &mut self.omega_t2,
            "hbar" => &mut self.hbar,
            "ds" => &mut self.ds,
            "c1" => &mut self.c1,
            "c2" => &mut self.c2,
            _ => return None,
        })
    }

    /// Rejects parameters that belong to the other mode.
    fn check_unused(&self, mode: CarnotMode) -> CliResult<()> {
        let keys = match mode {
            CarnotMode::Cycle => CYCLE_KEYS,
            CarnotMode::MaximizePower => POWER_KEYS,
        };
        let mut probe = self.clone();
        for name in [
            "t_hot", "t_cold", "omega_t1", "omega_t2", "hbar", "ds", "c1", "c2",
        ] {
            if !keys.contains(&name) && probe.slot(name).is_some_and(|s| s.is_some()) {
                return Err(CliError::schema(format!(
                    "parameter `{name}` is not used by carnot {}",
                    mode_name(mode)
                )));
            }
        }
        Ok(())
    }
}

fn mode_name(mode: CarnotMode) -> &'static str {
    match mode {
        CarnotMode::Cycle => "cycle",
        CarnotMode::MaximizePower => "maximize-power",
    }
}

pub struct Carnot;

impl Experiment for Carnot {
    const NAME: &'static str = "carnot";
    type Params = CarnotParams;

    fn set(p: &mut CarnotParams, name: &str, value: f64) -> CliResult<()> {
        let keys = match p.mode()? {
            CarnotMode::Cycle => CYCLE_KEYS,
            CarnotMode::MaximizePower => POWER_KEYS,
        };
        match p.slot(name) {
            Some(slot) if keys.contains(&name) => {
                *slot = Some(value);
                Ok(())
            }
            _ => Err(unknown_parameter(Self::NAME, name, keys)),
        }
    }

    fn tolerances(p: &CarnotParams) -> Value {
        match p.mode {
            Some(CarnotMode::MaximizePower) => json!({ "optimizer": default_power_tolerance() }),
            _ => json!({ "method": "closed form" }),
        }
    }

    fn evaluate(p: &CarnotParams) -> CliResult<Evaluation> {
        let mode = p.mode()?;
        p.check_unused(mode)?;
        let t_hot = require(p.t_hot, "t_hot")?;
        let t_cold = require(p.t_cold, "t_cold")?;
        match mode {
            CarnotMode::Cycle => {
                let spec = solve_adiabats(
                    require(p.omega_t1, "omega_t1")?,
                    require(p.omega_t2, "omega_t2")?,
                    1.0 / t_hot,
                    1.0 / t_cold,
                )?
                .with_hbar(p.hbar.unwrap_or(1.0))?;
                let c = reversible_cycle(&spec)?;
                Ok(Evaluation {
                    outputs: json!({
                        "omega_t": spec.omega_t,
                        "q_hot": c.q_hot,
                        "w_adiabat_1": c.w_adiabat_1,
                        "q_cold": c.q_cold,
                        "w_adiabat_2": c.w_adiabat_2,
                        "w_net_extracted": c.w_net_extracted,
                        "efficiency": c.efficiency,
                        "carnot_efficiency": 1.0 - t_cold / t_hot,
                    }),
                    columns: vec![
                        ("q_hot", c.q_hot),
                        ("w_adiabat_1", c.w_adiabat_1),
                        ("q_cold", c.q_cold),
                        ("w_adiabat_2", c.w_adiabat_2),
                        ("w_net_extracted", c.w_net_extracted),
                        ("efficiency", c.efficiency),
                    ],
                })
            }
            CarnotMode::MaximizePower => {
                let params = LowDissipationParams::new(
                    t_hot,
                    t_cold,
                    require(p.ds, "ds")?,
                    require(p.c1, "c1")?,
                    require(p.c2, "c2")?,
                )?;
                let opt = maximize_power(&params)?;
                let heats = irreversible_heats(&params, opt.tau_cold_star, opt.tau_hot_star)?;
                let eta_c = params.carnot_efficiency();
                Ok(Evaluation {
                    outputs: json!({
                        "tau_c": opt.tau_cold_star,
                        "tau_h": opt.tau_hot_star,
                        "p_star": opt.p_star,
                        "eta_star": opt.efficiency_star,
                        "q_ir_cold": heats.q_ir_cold,
                        "q_ir_hot": heats.q_ir_hot,
                        "carnot_efficiency": eta_c,
                        "curzon_ahlborn_efficiency": 1.0 - (t_cold / t_hot).sqrt(),
                    }),
                    columns: vec![
                        ("tau_c", opt.tau_cold_star),
                        ("tau_h", opt.tau_hot_star),
                        ("p_star", opt.p_star),
                        ("eta_star", opt.efficiency_star),
                    ],
                })
            }
        }
    }
}
