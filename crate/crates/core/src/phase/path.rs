use serde::{Deserialize, Serialize};

use super::{spin_eigenstate, Spinor};
use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Consecutive samples of an explicit path must overlap by at least this
/// much; anything smaller is treated as an antipodal jump.
pub const MIN_STEP_OVERLAP: f64 = 1e-9;
/// Analytic paths are refined until every consecutive overlap reaches this.
pub const MIN_ANALYTIC_OVERLAP: f64 = 0.5;
const NORM_TOL: f64 = 1e-12;
const SOUTH_POLE_TOL: f64 = 1e-12;
const MAX_ANALYTIC_SAMPLES: usize = 1 << 24;

/// A sampled curve of normalized two-level states.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochPath {
    times: Vec<f64>,
    samples: Vec<Spinor>,
    energy: Option<Vec<f64>>,
}

impl BlochPath {
    pub fn new(times: Vec<f64>, samples: Vec<Spinor>, energy: Option<Vec<f64>>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Domain("a path needs at least two samples".into()));
        }
        if times.len() != samples.len() {
            return Err(Error::Domain(format!(
                "{} times for {} samples",
                times.len(),
                samples.len()
            )));
        }
        if let Some(e) = &energy {
            if e.len() != samples.len() {
                return Err(Error::Domain(format!(
                    "{} energies for {} samples",
                    e.len(),
                    samples.len()
                )));
            }
            for v in e {
                ensure_finite("energy", *v)?;
            }
        }
        for t in &times {
            ensure_finite("time", *t)?;
        }
        if let Some(k) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Domain(format!(
                "times must be strictly increasing (t[{}] = {} >= t[{}] = {})",
                k,
                times[k],
                k + 1,
                times[k + 1]
            )));
        }
        for (k, s) in samples.iter().enumerate() {
            let n = s.norm();
            if n.is_nan() || (n - 1.0).abs() > NORM_TOL {
                return Err(Error::Domain(format!(
                    "sample {k} has norm {n}, expected 1"
                )));
            }
        }
        for (k, w) in samples.windows(2).enumerate() {
            let overlap = w[0].inner(&w[1]).norm();
            if overlap < MIN_STEP_OVERLAP {
                return Err(Error::Refinement(format!(
                    "samples {k} and {} are orthogonal (overlap {overlap:e})",
                    k + 1
                )));
            }
        }
        Ok(Self {
            times,
            samples,
            energy,
        })
    }

    /// Path of spin-up eigenstates along directions `(theta, phi)`.
    /// Directions at the south pole are rejected: the state section used by
    /// [`spin_eigenstate`] is singular there.
    pub fn from_angles(
        times: &[f64],
        thetas: &[f64],
        phis: &[f64],
        energy: Option<Vec<f64>>,
    ) -> Result<Self> {
        if thetas.len() != times.len() || phis.len() != times.len() {
            return Err(Error::Domain(
                "times, theta and phi must have equal lengths".into(),
            ));
        }
        let mut samples = Vec::with_capacity(times.len());
        for (k, (&theta, &phi)) in thetas.iter().zip(phis).enumerate() {
            ensure_finite("phi", phi)?;
            if !(0.0..=std::f64::consts::PI).contains(&theta) {
                return Err(Error::Domain(format!(
                    "theta[{k}] = {theta} outside [0, pi]"
                )));
            }
            if std::f64::consts::PI - theta < SOUTH_POLE_TOL {
                return Err(Error::Domain(format!(
                    "theta[{k}] is at the south pole, where the eigenstate section is singular"
                )));
            }
            samples.push(spin_eigenstate(theta, phi));
        }
        Self::new(times.to_vec(), samples, energy)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[Spinor] {
        &self.samples
    }

    pub fn energy(&self) -> Option<&[f64]> {
        self.energy.as_deref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Smallest `|⟨ψ_k|ψ_{k+1}⟩|` along the path.
    pub fn min_step_overlap(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| w[0].inner(&w[1]).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Same states traversed in the opposite order, with times mirrored.
    pub fn reversed(&self) -> Self {
        let t_end = self.times[self.times.len() - 1];
        let t_start = self.times[0];
        Self {
            times: self
                .times
                .iter()
                .rev()
                .map(|t| t_start + t_end - t)
                .collect(),
            samples: self.samples.iter().rev().copied().collect(),
            energy: self
                .energy
                .as_ref()
                .map(|e| e.iter().rev().copied().collect()),
        }
    }

    /// Splits at an interior sample; both halves contain sample `k`.
    pub fn split_at(&self, k: usize) -> Result<(Self, Self)> {
        if k == 0 || k + 1 >= self.samples.len() {
            return Err(Error::Domain(format!(
                "split index {k} is not interior to a path of {} samples",
                self.samples.len()
            )));
        }
        let part = |r: std::ops::Range<usize>| Self {
            times: self.times[r.clone()].to_vec(),
            samples: self.samples[r.clone()].to_vec(),
            energy: self.energy.as_ref().map(|e| e[r].to_vec()),
        };
        Ok((part(0..k + 1), part(k..self.samples.len())))
    }

    /// Each sample multiplied by `e^{iχ_k}`. The result describes the same
    /// rays with a different phase convention.
    pub fn redressed(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.samples.len() {
            return Err(Error::Domain("one phase per sample is required".into()));
        }
        Ok(Self {
            times: self.times.clone(),
            samples: self
                .samples
                .iter()
                .zip(phases)
                .map(|(s, &chi)| s.with_phase(chi))
                .collect(),
            energy: self.energy.clone(),
        })
    }

    /// Every other sample, always keeping both endpoints. `None` when the
    /// path has fewer than three samples.
    pub fn half_resolution(&self) -> Option<Self> {
        let n = self.samples.len();
        if n < 3 {
            return None;
        }
        let mut idx: Vec<usize> = (0..n).step_by(2).collect();
        if *idx.last().expect("non-empty") != n - 1 {
            idx.push(n - 1);
        }
        let half = Self {
            times: idx.iter().map(|&i| self.times[i]).collect(),
            samples: idx.iter().map(|&i| self.samples[i]).collect(),
            energy: self
                .energy
                .as_ref()
                .map(|e| idx.iter().map(|&i| e[i]).collect()),
        };
        // Coarsening can create near-antipodal steps; no estimate then.
        if half.min_step_overlap() < MIN_STEP_OVERLAP {
            return None;
        }
        Some(half)
    }
}

/// `offset + drift·t + amplitude·cos(frequency·t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub drift: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub frequency: f64,
    #[serde(default)]
    pub phase: f64,
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Self {
            offset: value,
            drift: 0.0,
            amplitude: 0.0,
            frequency: 0.0,
            phase: 0.0,
        }
    }

    pub fn linear(offset: f64, drift: f64) -> Self {
        Self {
            drift,
            ..Self::constant(offset)
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.offset + self.drift * t + self.amplitude * (self.frequency * t + self.phase).cos()
    }

    fn validate(&self, name: &str) -> Result<()> {
        ensure_finite(&format!("{name}.offset"), self.offset)?;
        ensure_finite(&format!("{name}.drift"), self.drift)?;
        ensure_finite(&format!("{name}.amplitude"), self.amplitude)?;
        ensure_finite(&format!("{name}.frequency"), self.frequency)?;
        ensure_finite(&format!("{name}.phase"), self.phase)?;
        Ok(())
    }
}

/// A path of spin-up eigenstates whose direction angles are analytic
/// functions of time on `[0, duration]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticPath {
    pub theta: Profile,
    pub phi: Profile,
    #[serde(default)]
    pub energy: Option<Profile>,
    pub duration: f64,
    pub samples: usize,
}

impl AnalyticPath {
    /// Samples the path, doubling the resolution until every consecutive
    /// overlap is at least [`MIN_ANALYTIC_OVERLAP`].
    pub fn build(&self) -> Result<BlochPath> {
        self.theta.validate("theta")?;
        self.phi.validate("phi")?;
        if let Some(e) = &self.energy {
            e.validate("energy")?;
        }
        ensure_positive("duration", self.duration)?;
        if self.samples < 2 {
            return Err(Error::Domain(
                "an analytic path needs at least 2 samples".into(),
            ));
        }
        let mut n = self.samples;
        loop {
            let (times, thetas, phis) = self.angles(n);
            let states: Vec<Spinor> = thetas
                .iter()
                .zip(&phis)
                .map(|(&t, &p)| spin_eigenstate(t, p))
                .collect();
            let resolved = states
                .windows(2)
                .all(|w| w[0].inner(&w[1]).norm() >= MIN_ANALYTIC_OVERLAP);
            if resolved {
                let energy = self
                    .energy
                    .map(|e| times.iter().map(|&t| e.value(t)).collect());
                return BlochPath::from_angles(&times, &thetas, &phis, energy);
            }
            n = 2 * n - 1;
            if n > MAX_ANALYTIC_SAMPLES {
                return Err(Error::Refinement(format!(
                    "consecutive overlaps still below {MIN_ANALYTIC_OVERLAP} at {n} samples"
                )));
            }
        }
    }

    fn angles(&self, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let times: Vec<f64> = (0..n)
            .map(|k| self.duration * k as f64 / (n - 1) as f64)
            .collect();
        let thetas = times.iter().map(|&t| self.theta.value(t)).collect();
        let phis = times.iter().map(|&t| self.phi.value(t)).collect();
        (times, thetas, phis)
    }
}
