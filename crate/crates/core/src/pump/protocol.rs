use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::Rates;
use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Lower bound on the total rate Γ⁺ + Γ⁻ over a period.
pub const RATE_FLOOR: f64 = 1e-9;

/// `offset + amplitude · cos(Ωt + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateModulation {
    pub offset: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

impl RateModulation {
    pub fn constant(value: f64) -> Self {
        Self {
            offset: value,
            amplitude: 0.0,
            phase: 0.0,
        }
    }

    pub fn new(offset: f64, amplitude: f64, phase: f64) -> Self {
        Self {
            offset,
            amplitude,
            phase,
        }
    }

    fn value(&self, omega: f64, t: f64) -> f64 {
        self.offset + self.amplitude * (omega * t + self.phase).cos()
    }

    fn derivative(&self, omega: f64, t: f64) -> f64 {
        -self.amplitude * omega * (omega * t + self.phase).sin()
    }

    /// Smallest value over a period.
    pub fn minimum(&self) -> f64 {
        self.offset - self.amplitude.abs()
    }

    pub fn is_modulated(&self) -> bool {
        self.amplitude != 0.0
    }
}

/// Four sinusoidally driven rates sharing the drive frequency Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateProtocol {
    pub gamma_l_plus: RateModulation,
    pub gamma_r_plus: RateModulation,
    pub gamma_l_minus: RateModulation,
    pub gamma_r_minus: RateModulation,
    pub drive_frequency: f64,
}

impl RateProtocol {
    /// Validates that every rate stays non-negative over the period and
    /// that the total rate never drops below [`RATE_FLOOR`].
    pub fn new(
        gamma_l_plus: RateModulation,
        gamma_r_plus: RateModulation,
        gamma_l_minus: RateModulation,
        gamma_r_minus: RateModulation,
        drive_frequency: f64,
    ) -> Result<Self> {
        ensure_positive("drive_frequency", drive_frequency)?;
        let named = [
            ("gamma_l_plus", &gamma_l_plus),
            ("gamma_r_plus", &gamma_r_plus),
            ("gamma_l_minus", &gamma_l_minus),
            ("gamma_r_minus", &gamma_r_minus),
        ];
        let mut floor = 0.0;
        for (name, m) in named {
            ensure_finite(&format!("{name}.offset"), m.offset)?;
            ensure_finite(&format!("{name}.amplitude"), m.amplitude)?;
            ensure_finite(&format!("{name}.phase"), m.phase)?;
            if m.minimum() < 0.0 {
                return Err(Error::Domain(format!(
                    "{name} dips to {} over the period; rates must stay >= 0",
                    m.minimum()
                )));
            }
            floor += m.minimum();
        }
        if floor < RATE_FLOOR {
            return Err(Error::Domain(format!(
                "total rate can drop to {floor:e}, below the floor {RATE_FLOOR:e}"
            )));
        }
        Ok(Self {
            gamma_l_plus,
            gamma_r_plus,
            gamma_l_minus,
            gamma_r_minus,
            drive_frequency,
        })
    }

    /// All four rates constant.
    pub fn constant(rates: &Rates, drive_frequency: f64) -> Result<Self> {
        Self::new(
            RateModulation::constant(rates.l_plus),
            RateModulation::constant(rates.r_plus),
            RateModulation::constant(rates.l_minus),
            RateModulation::constant(rates.r_minus),
            drive_frequency,
        )
    }

    /// `T = 2π/Ω`.
    pub fn period(&self) -> f64 {
        TAU / self.drive_frequency
    }

    fn modulations(&self) -> [&RateModulation; 4] {
        [
            &self.gamma_l_plus,
            &self.gamma_r_plus,
            &self.gamma_l_minus,
            &self.gamma_r_minus,
        ]
    }

    /// Mean of the four offsets, the natural rate scale of the protocol.
    pub fn mean_rate(&self) -> f64 {
        self.modulations().iter().map(|m| m.offset).sum::<f64>() / 4.0
    }

    /// Number of rates with a non-zero amplitude.
    pub fn modulated_count(&self) -> usize {
        self.modulations()
            .iter()
            .filter(|m| m.is_modulated())
            .count()
    }

    pub fn rates_at(&self, t: f64) -> Rates {
        let w = self.drive_frequency;
        Rates {
            l_plus: self.gamma_l_plus.value(w, t),
            r_plus: self.gamma_r_plus.value(w, t),
            l_minus: self.gamma_l_minus.value(w, t),
            r_minus: self.gamma_r_minus.value(w, t),
        }
    }

    /// Time derivatives of the four rates, packed in a [`Rates`].
    pub fn rate_derivatives_at(&self, t: f64) -> Rates {
        let w = self.drive_frequency;
        Rates {
            l_plus: self.gamma_l_plus.derivative(w, t),
            r_plus: self.gamma_r_plus.derivative(w, t),
            l_minus: self.gamma_l_minus.derivative(w, t),
            r_minus: self.gamma_r_minus.derivative(w, t),
        }
    }

    pub fn with_drive_frequency(&self, drive_frequency: f64) -> Result<Self> {
        Self::new(
            self.gamma_l_plus,
            self.gamma_r_plus,
            self.gamma_l_minus,
            self.gamma_r_minus,
            drive_frequency,
        )
    }

    /// The protocol run backwards in time, `t → −t`: every phase flips sign.
    pub fn time_reversed(&self) -> Self {
        let flip = |m: &RateModulation| RateModulation {
            phase: -m.phase,
            ..*m
        };
        Self {
            gamma_l_plus: flip(&self.gamma_l_plus),
            gamma_r_plus: flip(&self.gamma_r_plus),
            gamma_l_minus: flip(&self.gamma_l_minus),
            gamma_r_minus: flip(&self.gamma_r_minus),
            drive_frequency: self.drive_frequency,
        }
    }

    /// All rates multiplied by `k > 0`, at the same drive frequency.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        ensure_positive("scale", k)?;
        let s = |m: &RateModulation| RateModulation {
            offset: k * m.offset,
            amplitude: k * m.amplitude,
            phase: m.phase,
        };
        Self::new(
            s(&self.gamma_l_plus),
            s(&self.gamma_r_plus),
            s(&self.gamma_l_minus),
            s(&self.gamma_r_minus),
            self.drive_frequency,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_protocol() -> RateProtocol {
        RateProtocol::new(
            RateModulation::new(1.0, 0.5, 0.0),
            RateModulation::constant(0.5),
            RateModulation::constant(0.5),
            RateModulation::new(1.0, 0.5, std::f64::consts::FRAC_PI_2),
            0.1,
        )
        .unwrap()
    }

    #[test]
    fn period_and_mean_rate() {
        let p = loop_protocol();
        assert!((p.period() - TAU / 0.1).abs() < 1e-12);
        assert_eq!(p.mean_rate(), 0.75);
        assert_eq!(p.modulated_count(), 2);
    }

    #[test]
    fn rates_are_periodic() {
        let p = loop_protocol();
        let (a, b) = (p.rates_at(1.3), p.rates_at(1.3 + p.period()));
        assert!((a.l_plus - b.l_plus).abs() < 1e-12 && (a.r_minus - b.r_minus).abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = loop_protocol();
        let h = 1e-5;
        let d = p.rate_derivatives_at(2.0);
        let fd = (p.rates_at(2.0 + h).r_minus - p.rates_at(2.0 - h).r_minus) / (2.0 * h);
        assert!((d.r_minus - fd).abs() < 1e-9);
    }

    #[test]
    fn rejects_negative_rates_and_zero_floor() {
        let neg = RateModulation::new(0.2, 0.5, 0.0);
        let c = RateModulation::constant(1.0);
        assert!(RateProtocol::new(neg, c, c, c, 1.0).is_err());
        let z = RateModulation::constant(0.0);
        assert!(RateProtocol::new(z, z, z, z, 1.0).is_err());
        assert!(RateProtocol::new(c, c, c, c, 0.0).is_err());
    }

    #[test]
    fn time_reversal_mirrors_rates() {
        let p = loop_protocol();
        let r = p.time_reversed();
        let (a, b) = (p.rates_at(3.1), r.rates_at(-3.1));
        assert!((a.r_minus - b.r_minus).abs() < 1e-15 && (a.l_plus - b.l_plus).abs() < 1e-15);
    }
}
