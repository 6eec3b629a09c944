//! Dynamical, Berry and non-cyclic geometric phases of two-level states.
//!
//! For a discretized path `ψ_0 … ψ_N` the geometric phase is
//!
//! ```text
//! γ = arg⟨ψ_0|ψ_N⟩ − Σ_k arg⟨ψ_k|ψ_{k+1}⟩
//! ```
//!
//! The first (Pancharatnam) term and the second (connection) term each
//! depend on the phase convention of the individual states; their sum does
//! not. For a closed loop the endpoint term vanishes and `γ` is the Berry
//! phase, `−Ω/2` for a spin-up state whose direction encloses solid angle
//! `Ω`.

mod engine;
mod path;

pub use engine::{engine_path_phase, recover_beta, EngineCoordinatePath, EnginePoint};
pub use path::{AnalyticPath, BlochPath, Profile, MIN_ANALYTIC_OVERLAP, MIN_STEP_OVERLAP};

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Endpoint overlaps below this magnitude make the Pancharatnam term
/// undefined.
pub const UNDEFINED_OVERLAP: f64 = 1e-12;

/// A two-component state `(up, down)` in the σ_z basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub up: Complex64,
    pub down: Complex64,
}

impl Spinor {
    pub fn new(up: Complex64, down: Complex64) -> Self {
        Self { up, down }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    pub fn norm(&self) -> f64 {
        (self.up.norm_sqr() + self.down.norm_sqr()).sqrt()
    }

    /// `e^{iχ} |self⟩`.
    pub fn with_phase(&self, chi: f64) -> Spinor {
        let f = Complex64::from_polar(1.0, chi);
        Spinor::new(f * self.up, f * self.down)
    }

    /// Expectation of the Pauli vector `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let c = self.up.conj() * self.down;
        [
            2.0 * c.re,
            2.0 * c.im,
            self.up.norm_sqr() - self.down.norm_sqr(),
        ]
    }
}

/// Spin-up eigenstate along the direction with colatitude `theta` and
/// azimuth `phi`, in the section `(cos θ/2, e^{iφ} sin θ/2)`. The section is
/// singular at the south pole, where the azimuth is undefined.
pub fn spin_eigenstate(theta: f64, phi: f64) -> Spinor {
    let (s, c) = (0.5 * theta).sin_cos();
    Spinor::new(Complex64::new(c, 0.0), Complex64::from_polar(s, phi))
}

/// Maps an angle into `(−π, π]`.
pub fn principal_value(angle: f64) -> f64 {
    let y = angle.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Signed distance between two angles, in `(−π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    principal_value(a - b)
}

/// `arg⟨start|end⟩` in `(−π, π]`.
pub fn pancharatnam_arg(start: &Spinor, end: &Spinor) -> Result<f64> {
    let overlap = start.inner(end);
    let magnitude = overlap.norm();
    if magnitude < UNDEFINED_OVERLAP {
        return Err(Error::UndefinedPhase { overlap: magnitude });
    }
    Ok(principal_value(overlap.arg()))
}

/// Discretized `−Im ∫⟨ψ|dψ⟩` and an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionIntegral {
    pub value: f64,
    /// `|value − value at half resolution|`; zero for paths too short to
    /// subsample.
    pub error_estimate: f64,
}

fn bargmann_sum(samples: &[Spinor]) -> f64 {
    -samples
        .windows(2)
        .map(|w| w[0].inner(&w[1]).arg())
        .sum::<f64>()
}

/// `−Σ_k arg⟨ψ_k|ψ_{k+1}⟩`, which converges to `−Im ∫⟨ψ|dψ⟩` as the
/// sampling is refined.
pub fn connection_integral(path: &BlochPath) -> Result<ConnectionIntegral> {
    let value = bargmann_sum(path.samples());
    let error_estimate = match path.half_resolution() {
        Some(half) => (value - bargmann_sum(half.samples())).abs(),
        None => 0.0,
    };
    Ok(ConnectionIntegral {
        value,
        error_estimate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseResult {
    /// Principal value of `pancharatnam_term + connection_term`.
    pub total_geometric: f64,
    pub pancharatnam_term: f64,
    pub connection_term: f64,
    /// `pancharatnam_term + connection_term` without wrapping; tracks
    /// loops whose phase exceeds π in magnitude.
    pub unwrapped: f64,
    /// Change of `total_geometric` against the half-resolution path.
    pub error_estimate: f64,
    pub dynamical: Option<f64>,
}

fn geometric_parts(path: &BlochPath) -> Result<(f64, f64)> {
    let samples = path.samples();
    let pan = pancharatnam_arg(&samples[0], &samples[samples.len() - 1])?;
    Ok((pan, bargmann_sum(samples)))
}

/// Gauge-invariant geometric phase of an open or closed path.
pub fn geometric_phase(path: &BlochPath) -> Result<PhaseResult> {
    let (pancharatnam_term, connection_term) = geometric_parts(path)?;
    let unwrapped = pancharatnam_term + connection_term;
    let total_geometric = principal_value(unwrapped);
    let error_estimate = match path.half_resolution() {
        Some(half) => {
            let (p, c) = geometric_parts(&half)?;
            angle_difference(total_geometric, p + c).abs()
        }
        None => 0.0,
    };
    let dynamical = match path.energy() {
        Some(_) => Some(dynamical_phase(path)?.value),
        None => None,
    };
    Ok(PhaseResult {
        total_geometric,
        pancharatnam_term,
        connection_term,
        unwrapped,
        error_estimate,
        dynamical,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicalPhase {
    pub value: f64,
    pub error_estimate: f64,
}

fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, e)| 0.5 * (t[1] - t[0]) * (e[0] + e[1]))
        .sum()
}

/// `−∫ E(t) dt` (ħ = 1) by the trapezoidal rule over the path's energy
/// track.
pub fn dynamical_phase(path: &BlochPath) -> Result<DynamicalPhase> {
    let energy = path
        .energy()
        .ok_or_else(|| Error::Domain("path has no energy track".into()))?;
    let value = -trapezoid(path.times(), energy);
    let error_estimate = match path.half_resolution() {
        Some(half) => (value + trapezoid(half.times(), half.energy().expect("energy kept"))).abs(),
        None => 0.0,
    };
    Ok(DynamicalPhase {
        value,
        error_estimate,
    })
}
