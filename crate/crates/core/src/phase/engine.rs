use serde::Serialize;

use super::{geometric_phase, spin_eigenstate, BlochPath, PhaseResult};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::numerics::tanh;

const BISECTION_STEPS: usize = 200;
const BETA_RESIDUAL_TOL: f64 = 1e-12;

/// One state of the spin working medium: field ω̃, polarization ⟨s_z⟩ and
/// optionally the field direction `(theta, phi)` (default +z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnginePoint {
    pub omega_t: f64,
    pub s_z: f64,
    pub direction: Option<(f64, f64)>,
}

/// A timed sequence of engine states in the (ω̃, ⟨s_z⟩) plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineCoordinatePath {
    times: Vec<f64>,
    points: Vec<EnginePoint>,
    betas: Vec<f64>,
}

/// Solves `s_z = −½ tanh(ω̃β/2)` for β by bisection on `(0, 1e6/ω̃]`.
pub fn recover_beta(omega_t: f64, s_z: f64) -> Result<f64> {
    ensure_positive("omega_t", omega_t)?;
    ensure_finite("s_z", s_z)?;
    if !(s_z > -0.5 && s_z <= 0.0) {
        return Err(Error::Domain(format!("s_z = {s_z} outside (-1/2, 0]")));
    }
    if s_z == 0.0 {
        return Ok(0.0);
    }
    let polarization = |beta: f64| -0.5 * tanh(0.5 * omega_t * beta);
    let (mut lo, mut hi) = (0.0f64, 1e6 / omega_t);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        // Polarization decreases with β.
        if polarization(mid) > s_z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let residual = (s_z - polarization(beta)).abs();
    if residual > BETA_RESIDUAL_TOL {
        return Err(Error::Convergence(format!(
            "beta recovery residual {residual:e} for omega_t = {omega_t}, s_z = {s_z}"
        )));
    }
    Ok(beta)
}

impl EngineCoordinatePath {
    pub fn new(times: Vec<f64>, points: Vec<EnginePoint>) -> Result<Self> {
        if times.len() != points.len() {
            return Err(Error::Domain("one time per point is required".into()));
        }
        let betas = points
            .iter()
            .map(|p| recover_beta(p.omega_t, p.s_z))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times,
            points,
            betas,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[EnginePoint] {
        &self.points
    }

    /// Inverse temperature of each point.
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Thermal energies `−(ω̃/2) tanh(βω̃/2)`.
    pub fn energies(&self) -> Vec<f64> {
        self.points
            .iter()
            .zip(&self.betas)
            .map(|(p, b)| -0.5 * p.omega_t * tanh(0.5 * b * p.omega_t))
            .collect()
    }

    /// Spin-up eigenstates along each field direction, with the thermal
    /// energy track.
    pub fn to_bloch_path(&self) -> Result<BlochPath> {
        let mut thetas = Vec::with_capacity(self.points.len());
        let mut phis = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let (theta, phi) = p.direction.unwrap_or((0.0, 0.0));
            thetas.push(theta);
            phis.push(phi);
        }
        if thetas
            .iter()
            .zip(&phis)
            .all(|(t, p)| *t == thetas[0] && *p == phis[0])
        {
            // Fixed direction: every sample is the same state.
            let state = spin_eigenstate(thetas[0], phis[0]);
            return BlochPath::new(
                self.times.clone(),
                vec![state; self.points.len()],
                Some(self.energies()),
            );
        }
        BlochPath::from_angles(&self.times, &thetas, &phis, Some(self.energies()))
    }
}

/// Geometric and dynamical phase accumulated along an engine path.
pub fn engine_path_phase(path: &EngineCoordinatePath) -> Result<PhaseResult> {
    geometric_phase(&path.to_bloch_path()?)
}
