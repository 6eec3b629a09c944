//! Four-stroke Otto cycle with a single harmonic oscillator as working
//! medium.
//!
//! Strokes, in order:
//! 1. compression ω₁ → ω₂ of a state thermal at the cold bath (work `w1`),
//! 2. hot isochore at ω₂ (heat `q2` from the hot bath),
//! 3. expansion ω₂ → ω₁ of a state thermal at the hot bath (work `w3`),
//! 4. cold isochore at ω₁ (heat `q4`, negative when heat leaves).
//!
//! Works and heats are energy changes of the oscillator, so a positive
//! `w1` is work done *on* the medium. The cycle runs as an engine exactly
//! when `1 < ω₂/ω₁ < β_c/β_h`.

use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};
use crate::numerics::{coth, coth_difference, maximize_1d, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OttoSpec {
    pub omega1: f64,
    pub omega2: f64,
    pub beta_cold: f64,
    pub beta_hot: f64,
    pub hbar: f64,
}

impl OttoSpec {
    pub fn new(omega1: f64, omega2: f64, beta_cold: f64, beta_hot: f64) -> Result<Self> {
        Self::with_hbar(omega1, omega2, beta_cold, beta_hot, 1.0)
    }

    pub fn with_hbar(
        omega1: f64,
        omega2: f64,
        beta_cold: f64,
        beta_hot: f64,
        hbar: f64,
    ) -> Result<Self> {
        Ok(Self {
            omega1: ensure_positive("omega1", omega1)?,
            omega2: ensure_positive("omega2", omega2)?,
            beta_cold: ensure_positive("beta_cold", beta_cold)?,
            beta_hot: ensure_positive("beta_hot", beta_hot)?,
            hbar: ensure_positive("hbar", hbar)?,
        })
    }

    /// Builds a spec from bath temperatures (k_B = 1).
    pub fn from_temperatures(omega1: f64, omega2: f64, t_cold: f64, t_hot: f64) -> Result<Self> {
        let t_cold = ensure_positive("t_cold", t_cold)?;
        let t_hot = ensure_positive("t_hot", t_hot)?;
        Self::new(omega1, omega2, 1.0 / t_cold, 1.0 / t_hot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OttoCycleResult {
    pub w1: f64,
    pub q2: f64,
    pub w3: f64,
    pub q4: f64,
    pub w_net_extracted: f64,
    pub efficiency: f64,
}

/// Mean energy `(ħω/2) coth(βħω/2)` of an oscillator in a thermal state.
pub fn thermal_energy(omega: f64, beta: f64, hbar: f64) -> Result<f64> {
    ensure_positive("omega", omega)?;
    ensure_positive("beta", beta)?;
    ensure_positive("hbar", hbar)?;
    Ok(0.5 * hbar * omega * coth(0.5 * beta * hbar * omega))
}

/// Evaluates the four strokes and the efficiency.
///
/// Fails with [`Error::NotAnEngine`] unless `1 < ω₂/ω₁ < β_c/β_h`; outside
/// that window either no heat enters from the hot bath or no net work is
/// extracted, and an efficiency would be meaningless.
pub fn cycle(spec: &OttoSpec) -> Result<OttoCycleResult> {
    let OttoSpec {
        omega1,
        omega2,
        beta_cold,
        beta_hot,
        hbar,
    } = *spec;
    if beta_cold <= beta_hot {
        return Err(Error::Domain(format!(
            "cold bath must be colder than the hot bath (beta_cold = {beta_cold} <= beta_hot = {beta_hot})"
        )));
    }
    let x_cold = 0.5 * beta_cold * hbar * omega1;
    let x_hot = 0.5 * beta_hot * hbar * omega2;
    // coth_hot − coth_cold, evaluated without cancellation.
    let gap = coth_difference(x_hot, x_cold);

    let w1 = 0.5 * hbar * (omega2 - omega1) * coth(x_cold);
    let q2 = 0.5 * hbar * omega2 * gap;
    let w3 = 0.5 * hbar * (omega1 - omega2) * coth(x_hot);
    let q4 = -0.5 * hbar * omega1 * gap;
    let w_net_extracted = 0.5 * hbar * (omega2 - omega1) * gap;

    let ratio = omega2 / omega1;
    if ratio <= 1.0 || ratio >= beta_cold / beta_hot || q2 <= 0.0 || w_net_extracted <= 0.0 {
        return Err(Error::NotAnEngine {
            reason: format!(
                "frequency ratio {ratio} outside the engine window (1, {})",
                beta_cold / beta_hot
            ),
            net_work: w_net_extracted,
        });
    }
    Ok(OttoCycleResult {
        w1,
        q2,
        w3,
        q4,
        w_net_extracted,
        efficiency: w_net_extracted / q2,
    })
}

fn check_baths(beta_cold: f64, beta_hot: f64) -> Result<()> {
    ensure_positive("beta_cold", beta_cold)?;
    ensure_positive("beta_hot", beta_hot)?;
    if beta_cold < beta_hot {
        return Err(Error::Domain(format!(
            "beta_cold = {beta_cold} must not be smaller than beta_hot = {beta_hot}"
        )));
    }
    Ok(())
}

/// Net extracted work `−(W₁ + W₃)` in the high-temperature limit
/// `βħω ≪ 1`, where `coth(x) ≈ 1/x`:
/// `(1 − ω₁/ω₂)/β_h − (ω₂/ω₁ − 1)/β_c`. Independent of ħ and of the
/// absolute frequency scale.
pub fn high_temperature_net_work(ratio: f64, beta_cold: f64, beta_hot: f64) -> Result<f64> {
    ensure_positive("ratio", ratio)?;
    check_baths(beta_cold, beta_hot)?;
    Ok((1.0 - 1.0 / ratio) / beta_hot - (ratio - 1.0) / beta_cold)
}

/// Frequency ratio ω₂/ω₁ = √(β_c/β_h) maximizing the high-temperature net
/// work. Equal bath temperatures give 1.
pub fn max_power_frequency_ratio(beta_cold: f64, beta_hot: f64) -> Result<f64> {
    check_baths(beta_cold, beta_hot)?;
    Ok((beta_cold / beta_hot).sqrt())
}

/// Curzon–Ahlborn efficiency `1 − √(T_C/T_H) = 1 − √(β_h/β_c)`.
pub fn efficiency_at_max_power(beta_cold: f64, beta_hot: f64) -> Result<f64> {
    check_baths(beta_cold, beta_hot)?;
    Ok(1.0 - (beta_hot / beta_cold).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxWorkPoint {
    pub ratio: f64,
    pub w_net_extracted: f64,
    pub efficiency: f64,
}

/// Maximizes the exact (full coth) net extracted work over ω₂ at fixed ω₁
/// and bath temperatures by golden section on the engine window.
pub fn maximize_net_work(
    omega1: f64,
    beta_cold: f64,
    beta_hot: f64,
    hbar: f64,
) -> Result<MaxWorkPoint> {
    ensure_positive("omega1", omega1)?;
    ensure_positive("hbar", hbar)?;
    check_baths(beta_cold, beta_hot)?;
    let upper = beta_cold / beta_hot;
    if upper <= 1.0 {
        return Err(Error::NotAnEngine {
            reason: "no temperature gap".into(),
            net_work: 0.0,
        });
    }
    let net_work = |ratio: f64| {
        let omega2 = ratio * omega1;
        let coth_cold = coth(0.5 * beta_cold * hbar * omega1);
        let coth_hot = coth(0.5 * beta_hot * hbar * omega2);
        0.5 * hbar * (omega2 - omega1) * (coth_hot - coth_cold)
    };
    let tol = Tolerance::new(0.0, 1e-12, 10_000)?;
    let best = maximize_1d(net_work, 1.0, upper, &tol)?;
    let spec = OttoSpec::with_hbar(omega1, best.argmax * omega1, beta_cold, beta_hot, hbar)?;
    let result = cycle(&spec)?;
    Ok(MaxWorkPoint {
        ratio: best.argmax,
        w_net_extracted: result.w_net_extracted,
        efficiency: result.efficiency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_energy_limits() {
        assert!((thermal_energy(1.0, 1e3, 1.0).unwrap() - 0.5).abs() < 1e-15);
        // (2/2) coth(1)
        assert!((thermal_energy(2.0, 1.0, 1.0).unwrap() - 1.313_035_3).abs() < 1e-7);
        let e = thermal_energy(1.0, 1e-3, 1.0).unwrap();
        assert!((e / 1000.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn thermal_energy_rejects_bad_input() {
        assert!(thermal_energy(0.0, 1.0, 1.0).is_err());
        assert!(thermal_energy(1.0, -1.0, 1.0).is_err());
        assert!(thermal_energy(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn thermal_energy_decreases_with_beta() {
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let e = thermal_energy(1.3, 0.05 * i as f64, 1.0).unwrap();
            assert!(e < prev && e >= 0.65);
            prev = e;
        }
    }

    #[test]
    fn degenerate_cycle_is_not_an_engine() {
        let spec = OttoSpec::new(1.0, 1.0, 1.0, 0.25).unwrap();
        match cycle(&spec) {
            Err(Error::NotAnEngine { net_work, .. }) => assert_eq!(net_work, 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ratio_two_gives_half() {
        let spec = OttoSpec::new(1.0, 2.0, 1.0, 0.25).unwrap();
        let r = cycle(&spec).unwrap();
        assert!((r.efficiency - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reference_cycle() {
        // Oracle: each stroke evaluated with std tanh.
        let c = |x: f64| 1.0 / x.tanh();
        let (w1_ref, q2_ref) = (0.25 * c(0.5), 0.75 * (c(0.1875) - c(0.5)));
        let spec = OttoSpec::new(1.0, 1.5, 1.0, 0.25).unwrap();
        let r = cycle(&spec).unwrap();
        assert!((r.w1 - w1_ref).abs() < 1e-13);
        assert!((r.q2 - q2_ref).abs() < 1e-13);
        assert!(r.q2 > 0.0);
        assert!((r.efficiency - 1.0 / 3.0).abs() < 1e-14);
        let sum = r.w1 + r.q2 + r.w3 + r.q4;
        assert!(sum.abs() <= 1e-12 * r.q2.abs().max(r.w1.abs()));
    }

    #[test]
    fn wrong_sign_reports_net_work() {
        // Ratio above β_c/β_h: heat flows the wrong way.
        let spec = OttoSpec::new(1.0, 5.0, 1.0, 0.25).unwrap();
        match cycle(&spec) {
            Err(Error::NotAnEngine { net_work, .. }) => assert!(net_work < 0.0),
            other => panic!("{other:?}"),
        }
        let spec = OttoSpec::new(2.0, 1.0, 1.0, 0.25).unwrap();
        assert!(matches!(cycle(&spec), Err(Error::NotAnEngine { .. })));
    }

    #[test]
    fn max_power_ratio_values() {
        assert!((max_power_frequency_ratio(1.0, 0.25).unwrap() - 2.0).abs() < 1e-15);
        assert!((max_power_frequency_ratio(1.0 + 1e-12, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(max_power_frequency_ratio(0.2, 1.0).is_err());
    }

    #[test]
    fn max_power_ratio_matches_grid_search() {
        // Brute-force grid, then golden-section refinement, of the
        // high-temperature net work written out independently.
        let (bc, bh) = (1.0, 0.25);
        let work = |r: f64| (1.0 - 1.0 / r) / bh - (r - 1.0) / bc;
        let n = 30_000;
        let best = (1..n)
            .map(|i| 1.0 + 3.0 * i as f64 / n as f64)
            .max_by(|a, b| work(*a).total_cmp(&work(*b)))
            .unwrap();
        let (mut lo, mut hi) = (best - 3.0 / n as f64, best + 3.0 / n as f64);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let (c, d) = (hi - g * (hi - lo), lo + g * (hi - lo));
            if work(c) > work(d) {
                hi = d;
            } else {
                lo = c;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!((oracle - max_power_frequency_ratio(bc, bh).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn curzon_ahlborn_values() {
        assert_eq!(efficiency_at_max_power(1.0, 1.0).unwrap(), 0.0);
        assert!((efficiency_at_max_power(1.0, 0.25).unwrap() - 0.5).abs() < 1e-15);
        assert!((efficiency_at_max_power(1.0, 0.5).unwrap() - 0.292_893_2).abs() < 1e-7);
    }

    #[test]
    fn efficiency_at_max_power_consistent_with_ratio() {
        let (bc, bh) = (3.0, 0.7);
        let r = max_power_frequency_ratio(bc, bh).unwrap();
        let eta = efficiency_at_max_power(bc, bh).unwrap();
        assert!((eta - (1.0 - 1.0 / r)).abs() < 1e-15);
    }

    #[test]
    fn high_temperature_works_match_exact() {
        let spec = OttoSpec::new(1.0, 1.7, 0.005, 0.001).unwrap();
        let r = cycle(&spec).unwrap();
        let w1_ht = (spec.omega2 - spec.omega1) / (spec.beta_cold * spec.omega1);
        let w3_ht = (spec.omega1 - spec.omega2) / (spec.beta_hot * spec.omega2);
        assert!((r.w1 / w1_ht - 1.0).abs() < 1e-3);
        assert!((r.w3 / w3_ht - 1.0).abs() < 1e-3);
        let net = high_temperature_net_work(1.7, 0.005, 0.001).unwrap();
        assert!((r.w_net_extracted / net - 1.0).abs() < 1e-3);
    }

    #[test]
    fn exact_maximization_approaches_curzon_ahlborn() {
        for ratio in [2.0, 4.0, 9.0] {
            let bc = 0.005;
            let p = maximize_net_work(1.0, bc, bc / ratio, 1.0).unwrap();
            let ca = 1.0 - (1.0 / ratio).sqrt();
            assert!((p.efficiency - ca).abs() < 1e-3, "{ratio}: {p:?}");
        }
    }
}
