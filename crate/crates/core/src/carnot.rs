//! Spin-1/2 Carnot cycle: the reversible four-stroke cycle and the
//! low-dissipation finite-time model.
//!
//! The spin sits in a field along +z with `H = ω̃ ŝ_z`, so a thermal state
//! has `⟨s_z⟩ = −½ tanh(βħω̃/2)` and energy `E = ħω̃⟨s_z⟩ < 0`. Stroke
//! heats and works below are differences of this `E`.

use serde::Serialize;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::numerics::{maximize_2d, tanh, Tolerance};

/// Relative tolerance of the adiabat condition `β_H ω̃₁ = β_C ω̃₄`,
/// `β_H ω̃₂ = β_C ω̃₃`.
const ADIABAT_REL_TOL: f64 = 1e-12;

/// `⟨s_z⟩ = −½ tanh(ω̃β/2)` (ħ = 1).
pub fn spin_polarization(omega_t: f64, beta: f64) -> Result<f64> {
    ensure_positive("omega_t", omega_t)?;
    ensure_positive("beta", beta)?;
    Ok(-0.5 * tanh(0.5 * omega_t * beta))
}

/// Internal energy `ħω̃⟨s_z⟩ = −(ħω̃/2) tanh(βħω̃/2)`.
pub fn spin_energy(omega_t: f64, beta: f64, hbar: f64) -> Result<f64> {
    ensure_positive("omega_t", omega_t)?;
    ensure_positive("beta", beta)?;
    ensure_positive("hbar", hbar)?;
    Ok(-0.5 * hbar * omega_t * tanh(0.5 * beta * hbar * omega_t))
}

/// Corner fields of the cycle. `omega_t[0..4]` are ω̃₁..ω̃₄ at the points
/// A, B, C, D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinCycleSpec {
    pub omega_t: [f64; 4],
    pub beta_hot: f64,
    pub beta_cold: f64,
    pub hbar: f64,
}

impl SpinCycleSpec {
    pub fn new(omega_t: [f64; 4], beta_hot: f64, beta_cold: f64, hbar: f64) -> Result<Self> {
        for (i, w) in omega_t.iter().enumerate() {
            ensure_positive(&format!("omega_t{}", i + 1), *w)?;
        }
        ensure_positive("beta_hot", beta_hot)?;
        ensure_positive("beta_cold", beta_cold)?;
        ensure_positive("hbar", hbar)?;
        if beta_cold < beta_hot {
            return Err(Error::Domain(format!(
                "beta_cold = {beta_cold} must not be smaller than beta_hot = {beta_hot}"
            )));
        }
        Ok(Self {
            omega_t,
            beta_hot,
            beta_cold,
            hbar,
        })
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        self.hbar = ensure_positive("hbar", hbar)?;
        Ok(self)
    }

    /// Largest relative violation of the two adiabat conditions.
    pub fn adiabat_residual(&self) -> f64 {
        let [w1, w2, w3, w4] = self.omega_t;
        let r = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
        r(self.beta_hot * w1, self.beta_cold * w4).max(r(self.beta_hot * w2, self.beta_cold * w3))
    }
}

/// Completes the cycle from the hot-isotherm fields: the adiabats keep
/// `⟨s_z⟩` fixed, hence `ω̃₃ = ω̃₂ β_H/β_C` and `ω̃₄ = ω̃₁ β_H/β_C`.
pub fn solve_adiabats(
    omega_t1: f64,
    omega_t2: f64,
    beta_hot: f64,
    beta_cold: f64,
) -> Result<SpinCycleSpec> {
    ensure_positive("omega_t1", omega_t1)?;
    ensure_positive("omega_t2", omega_t2)?;
    ensure_positive("beta_hot", beta_hot)?;
    ensure_positive("beta_cold", beta_cold)?;
    let shrink = beta_hot / beta_cold;
    SpinCycleSpec::new(
        [omega_t1, omega_t2, omega_t2 * shrink, omega_t1 * shrink],
        beta_hot,
        beta_cold,
        1.0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReversibleCycle {
    pub q_hot: f64,
    pub w_adiabat_1: f64,
    pub q_cold: f64,
    pub w_adiabat_2: f64,
    pub w_net_extracted: f64,
    pub efficiency: f64,
}

/// Strokes A→B (hot isotherm), B→C (adiabat), C→D (cold isotherm) and
/// D→A (adiabat). Requires ω̃₁ > ω̃₂ so that heat enters on the hot
/// isotherm. Efficiency is extracted work over absorbed heat.
pub fn reversible_cycle(spec: &SpinCycleSpec) -> Result<ReversibleCycle> {
    let residual = spec.adiabat_residual();
    if residual > ADIABAT_REL_TOL {
        return Err(Error::Domain(format!(
            "corner fields violate the adiabat condition (relative residual {residual:e})"
        )));
    }
    let [w1, w2, w3, w4] = spec.omega_t;
    let (bh, bc, hbar) = (spec.beta_hot, spec.beta_cold, spec.hbar);
    let e_a = spin_energy(w1, bh, hbar)?;
    let e_b = spin_energy(w2, bh, hbar)?;
    let e_c = spin_energy(w3, bc, hbar)?;
    let e_d = spin_energy(w4, bc, hbar)?;

    let q_hot = e_b - e_a;
    let w_adiabat_1 = e_c - e_b;
    let q_cold = e_d - e_c;
    let w_adiabat_2 = e_a - e_d;
    let w_net_extracted = q_hot + q_cold;
    if w1 <= w2 || q_hot <= 0.0 {
        return Err(Error::NotAnEngine {
            reason: format!(
                "hot isotherm must lower the field (omega_t1 = {w1} <= omega_t2 = {w2})"
            ),
            net_work: w_net_extracted,
        });
    }
    Ok(ReversibleCycle {
        q_hot,
        w_adiabat_1,
        q_cold,
        w_adiabat_2,
        w_net_extracted,
        efficiency: w_net_extracted / q_hot,
    })
}

/// Inputs of the low-dissipation model: bath temperatures, the reversible
/// entropy change per cycle and the two dissipation coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowDissipationParams {
    pub t_hot: f64,
    pub t_cold: f64,
    pub delta_s: f64,
    pub c1: f64,
    pub c2: f64,
}

impl LowDissipationParams {
    pub fn new(t_hot: f64, t_cold: f64, delta_s: f64, c1: f64, c2: f64) -> Result<Self> {
        ensure_positive("t_hot", t_hot)?;
        ensure_positive("t_cold", t_cold)?;
        ensure_positive("delta_s", delta_s)?;
        ensure_non_negative("c1", c1)?;
        ensure_non_negative("c2", c2)?;
        if t_hot < t_cold {
            return Err(Error::Domain(format!(
                "t_hot = {t_hot} is below t_cold = {t_cold}"
            )));
        }
        Ok(Self {
            t_hot,
            t_cold,
            delta_s,
            c1,
            c2,
        })
    }

    /// Carnot efficiency `1 − T_C/T_H`.
    pub fn carnot_efficiency(&self) -> f64 {
        1.0 - self.t_cold / self.t_hot
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IrreversibleHeats {
    pub q_ir_cold: f64,
    pub q_ir_hot: f64,
}

fn check_durations(tau_cold: f64, tau_hot: f64) -> Result<()> {
    ensure_positive("tau_cold", tau_cold)?;
    ensure_positive("tau_hot", tau_hot)?;
    Ok(())
}

/// Heats exchanged with each bath when the contacts last `tau_cold` and
/// `tau_hot`: `T_C(−ΔS − C₁/τ_C)` and `T_H(ΔS − C₂/τ_H)`.
pub fn irreversible_heats(
    p: &LowDissipationParams,
    tau_cold: f64,
    tau_hot: f64,
) -> Result<IrreversibleHeats> {
    check_durations(tau_cold, tau_hot)?;
    Ok(IrreversibleHeats {
        q_ir_cold: p.t_cold * (-p.delta_s - p.c1 / tau_cold),
        q_ir_hot: p.t_hot * (p.delta_s - p.c2 / tau_hot),
    })
}

/// Extracted work per unit cycle time.
pub fn power(p: &LowDissipationParams, tau_cold: f64, tau_hot: f64) -> Result<f64> {
    check_durations(tau_cold, tau_hot)?;
    Ok(power_unchecked(p, tau_cold, tau_hot))
}

fn power_unchecked(p: &LowDissipationParams, tau_cold: f64, tau_hot: f64) -> f64 {
    let numerator =
        (p.t_hot - p.t_cold) * p.delta_s - p.t_cold * p.c1 / tau_cold - p.t_hot * p.c2 / tau_hot;
    numerator / (tau_hot + tau_cold)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerOptimum {
    pub tau_cold_star: f64,
    pub tau_hot_star: f64,
    pub p_star: f64,
    pub efficiency_star: f64,
}

/// Optimizer settings used by [`maximize_power`].
pub fn default_power_tolerance() -> Tolerance {
    Tolerance {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        max_steps: 20_000,
    }
}

/// Contact durations maximizing [`power`], found numerically.
///
/// With either dissipation coefficient at zero the optimum sits on the
/// boundary (that contact wants zero duration), and with no temperature gap
/// the power is never positive; both are reported as
/// [`Error::NoInteriorMaximum`].
pub fn maximize_power(p: &LowDissipationParams) -> Result<PowerOptimum> {
    maximize_power_from(p, None)
}

/// As [`maximize_power`], with an explicit starting point `(τ_C, τ_H)`.
/// The default start is `τ_C = τ_H = 10 max(C₁, C₂)/ΔS`.
pub fn maximize_power_from(
    p: &LowDissipationParams,
    guess: Option<(f64, f64)>,
) -> Result<PowerOptimum> {
    if p.t_hot <= p.t_cold {
        return Err(Error::NoInteriorMaximum(
            "no temperature gap: power is negative for every duration".into(),
        ));
    }
    if p.c1 == 0.0 || p.c2 == 0.0 {
        return Err(Error::NoInteriorMaximum(
            "a vanishing dissipation coefficient puts the optimum at zero contact time".into(),
        ));
    }
    let guess = match guess {
        Some((c, h)) => {
            check_durations(c, h)?;
            (c, h)
        }
        None => {
            let tau = 10.0 * p.c1.max(p.c2) / p.delta_s;
            (tau, tau)
        }
    };
    let best = maximize_2d(
        |c, h| power_unchecked(p, c, h),
        guess,
        &default_power_tolerance(),
    )?;
    let (tau_cold_star, tau_hot_star) = best.argmax;
    if best.value <= 0.0 {
        return Err(Error::NoInteriorMaximum(format!(
            "best power {} is not positive",
            best.value
        )));
    }
    let heats = irreversible_heats(p, tau_cold_star, tau_hot_star)?;
    Ok(PowerOptimum {
        tau_cold_star,
        tau_hot_star,
        p_star: best.value,
        efficiency_star: (heats.q_ir_hot + heats.q_ir_cold) / heats.q_ir_hot,
    })
}
