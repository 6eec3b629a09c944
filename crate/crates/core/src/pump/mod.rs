//! Charge pumping through a periodically driven two-state quantum dot.
//!
//! The dot is empty (state 0) or occupied (state 1). Electrons tunnel in
//! from reservoir α ∈ {L, R} with rate Γ_α⁺ and out into it with rate Γ_α⁻.
//! The occupation probabilities obey `dP/dt = L(t) P` with
//!
//! ```text
//! L = [[-(Γ_L⁺ + Γ_R⁺),   Γ_L⁻ + Γ_R⁻ ],
//!      [  Γ_L⁺ + Γ_R⁺ , -(Γ_L⁻ + Γ_R⁻)]]
//! ```
//!
//! Charge "into reservoir α" counts electrons leaving the dot towards α
//! minus electrons arriving from α: the instantaneous current is
//! `Γ_α⁻ P₁ − Γ_α⁺ P₀`.
//!
//! Besides the exact periodic steady state, the pumped charge per period is
//! split adiabatically into a dynamic part carried by the instantaneous
//! stationary state π(t) and a geometric part from the first-order
//! correction `δπ = R dπ/dt`, where `R` is the group inverse of `L` on the
//! zero-sum subspace.

mod protocol;

pub use protocol::{RateModulation, RateProtocol, RATE_FLOOR};

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use crate::error::{ensure_non_negative, Error, Result};
use crate::numerics::{
    integrate_adaptive_vec, integrate_ode, null_vector_2, Tolerance, Trajectory,
};

/// Absolute error target of the one-period quadratures.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Convergence threshold of the period map, `‖P(T) − P(0)‖`.
pub const PERIODIC_TOL: f64 = 1e-10;
pub const MAX_PERIOD_ITERATIONS: usize = 1000;

/// Instantaneous tunneling rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates {
    pub l_plus: f64,
    pub r_plus: f64,
    pub l_minus: f64,
    pub r_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reservoir {
    Left,
    Right,
}

impl Rates {
    pub fn new(l_plus: f64, r_plus: f64, l_minus: f64, r_minus: f64) -> Result<Self> {
        Ok(Self {
            l_plus: ensure_non_negative("gamma_l_plus", l_plus)?,
            r_plus: ensure_non_negative("gamma_r_plus", r_plus)?,
            l_minus: ensure_non_negative("gamma_l_minus", l_minus)?,
            r_minus: ensure_non_negative("gamma_r_minus", r_minus)?,
        })
    }

    pub fn uniform(rate: f64) -> Result<Self> {
        Self::new(rate, rate, rate, rate)
    }

    /// Γ⁺ = Γ_L⁺ + Γ_R⁺.
    pub fn total_in(&self) -> f64 {
        self.l_plus + self.r_plus
    }

    /// Γ⁻ = Γ_L⁻ + Γ_R⁻.
    pub fn total_out(&self) -> f64 {
        self.l_minus + self.r_minus
    }

    pub fn total(&self) -> f64 {
        self.total_in() + self.total_out()
    }

    /// `(Γ_α⁺, Γ_α⁻)` of one reservoir.
    pub fn of(&self, reservoir: Reservoir) -> (f64, f64) {
        match reservoir {
            Reservoir::Left => (self.l_plus, self.l_minus),
            Reservoir::Right => (self.r_plus, self.r_minus),
        }
    }

    /// Rates as a point of parameter space, ordered
    /// `(Γ_R⁺, Γ_L⁺, Γ_R⁻, Γ_L⁻)`.
    pub fn as_gamma_vector(&self) -> [f64; 4] {
        [self.r_plus, self.l_plus, self.r_minus, self.l_minus]
    }

    pub fn from_gamma_vector(g: [f64; 4]) -> Result<Self> {
        Self::new(g[1], g[0], g[3], g[2])
    }

    fn ensure_nondegenerate(&self) -> Result<f64> {
        let s = self.total();
        if s > 0.0 {
            Ok(s)
        } else {
            Err(Error::DegenerateGenerator)
        }
    }
}

/// Distribution over the empty (`p0`) and occupied (`p1`) dot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoStateDistribution {
    pub p0: f64,
    pub p1: f64,
}

impl TwoStateDistribution {
    pub fn as_vector(&self) -> Vector2<f64> {
        Vector2::new(self.p0, self.p1)
    }

    fn from_vector(v: &Vector2<f64>) -> Self {
        Self { p0: v[0], p1: v[1] }
    }

    /// Copy with round-off negatives clipped to zero, for reporting.
    pub fn clamped(&self) -> Self {
        Self {
            p0: self.p0.max(0.0),
            p1: self.p1.max(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChargeKind {
    Exact,
    Dynamic,
    Geometric,
}

/// Charge per period into each reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PumpedCharge {
    pub n_right: f64,
    pub n_left: f64,
    pub n_total: f64,
    pub kind: ChargeKind,
}

impl PumpedCharge {
    fn new(n_right: f64, n_left: f64, kind: ChargeKind) -> Self {
        Self {
            n_right,
            n_left,
            n_total: n_right + n_left,
            kind,
        }
    }

    pub fn towards(&self, reservoir: Reservoir) -> f64 {
        match reservoir {
            Reservoir::Left => self.n_left,
            Reservoir::Right => self.n_right,
        }
    }
}

fn generator(r: &Rates) -> Matrix2<f64> {
    let (up, down) = (r.total_in(), r.total_out());
    Matrix2::new(-up, down, up, -down)
}

/// The rate matrix `L`; its columns sum to zero.
pub fn rate_matrix(rates: &Rates) -> Result<Matrix2<f64>> {
    rates.ensure_nondegenerate()?;
    Ok(generator(rates))
}

/// Current matrices. Contracting any of them with the all-ones covector
/// `⟨1|` and a distribution `|P⟩` gives the corresponding current.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentMatrices {
    /// `(Γ_R⁻ + Γ_L⁻)` at row 0, column 1.
    pub j_plus: Matrix2<f64>,
    /// `(Γ_L⁺ + Γ_R⁺)` at row 1, column 0.
    pub j_minus: Matrix2<f64>,
    pub j_net: Matrix2<f64>,
    pub j_right: Matrix2<f64>,
    pub j_left: Matrix2<f64>,
}

impl CurrentMatrices {
    pub fn for_reservoir(&self, reservoir: Reservoir) -> &Matrix2<f64> {
        match reservoir {
            Reservoir::Left => &self.j_left,
            Reservoir::Right => &self.j_right,
        }
    }
}

fn reservoir_current_matrix(plus: f64, minus: f64) -> Matrix2<f64> {
    Matrix2::new(0.0, minus, -plus, 0.0)
}

pub fn current_matrices(rates: &Rates) -> CurrentMatrices {
    let j_plus = Matrix2::new(0.0, rates.total_out(), 0.0, 0.0);
    let j_minus = Matrix2::new(0.0, 0.0, rates.total_in(), 0.0);
    CurrentMatrices {
        j_plus,
        j_minus,
        j_net: j_plus - j_minus,
        j_right: reservoir_current_matrix(rates.r_plus, rates.r_minus),
        j_left: reservoir_current_matrix(rates.l_plus, rates.l_minus),
    }
}

/// `⟨1| J |v⟩`.
pub fn contract(j: &Matrix2<f64>, v: &Vector2<f64>) -> f64 {
    (j * v).sum()
}

fn current(rates: &Rates, reservoir: Reservoir, v: &Vector2<f64>) -> f64 {
    let (plus, minus) = rates.of(reservoir);
    minus * v[1] - plus * v[0]
}

/// Null vector of `L`: `π = (Γ⁻, Γ⁺) / (Γ⁺ + Γ⁻)`.
pub fn stationary_state(rates: &Rates) -> Result<TwoStateDistribution> {
    let pi = null_vector_2(&rate_matrix(rates)?)?;
    Ok(TwoStateDistribution::from_vector(&pi))
}

fn stationary_unchecked(r: &Rates) -> Vector2<f64> {
    let s = r.total();
    Vector2::new(r.total_out() / s, r.total_in() / s)
}

/// Applies the group inverse `R` of `L` to a zero-sum vector. On that
/// subspace `L v = −(Γ⁺ + Γ⁻) v`, so `R v = −v / (Γ⁺ + Γ⁻)`.
pub fn group_inverse_apply(rates: &Rates, v: &Vector2<f64>) -> Result<Vector2<f64>> {
    let s = rates.ensure_nondegenerate()?;
    let scale = v[0].abs().max(v[1].abs());
    if (v[0] + v[1]).abs() > 1e-12 * scale.max(1e-300) && scale > 0.0 {
        return Err(Error::Domain(format!(
            "group inverse is only defined on zero-sum vectors, got ({}, {})",
            v[0], v[1]
        )));
    }
    Ok(-v / s)
}

/// `∂π/∂Γ_k` for each parameter-space direction, in the order of
/// [`Rates::as_gamma_vector`].
pub fn stationary_state_gradient(rates: &Rates) -> Result<[Vector2<f64>; 4]> {
    let s = rates.ensure_nondegenerate()?;
    let s2 = s * s;
    // π₀ = Γ⁻/S: ∂π₀/∂Γ_α⁺ = −Γ⁻/S², ∂π₀/∂Γ_α⁻ = Γ⁺/S².
    let d_plus = -rates.total_out() / s2;
    let d_minus = rates.total_in() / s2;
    let v = |d: f64| Vector2::new(d, -d);
    Ok([v(d_plus), v(d_plus), v(d_minus), v(d_minus)])
}

fn stationary_time_derivative(r: &Rates, dr: &Rates) -> Vector2<f64> {
    let s = r.total();
    let d0 = (dr.total_out() * r.total_in() - r.total_out() * dr.total_in()) / (s * s);
    Vector2::new(d0, -d0)
}

/// First-order adiabatic correction `δπ(t) = R(t) dπ/dt` to the
/// instantaneous stationary state. A zero-sum vector.
pub fn adiabatic_correction(protocol: &RateProtocol, t: f64) -> Vector2<f64> {
    let r = protocol.rates_at(t);
    let dpi = stationary_time_derivative(&r, &protocol.rate_derivatives_at(t));
    -dpi / r.total()
}

/// Parameter-space vector potential: for each reservoir, the covector
/// `A_α = ⟨1| J_α R ∂π/∂Γ`, components ordered as
/// [`Rates::as_gamma_vector`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorPotential {
    pub right: [f64; 4],
    pub left: [f64; 4],
}

impl VectorPotential {
    pub fn at(rates: &Rates) -> Result<Self> {
        let grad = stationary_state_gradient(rates)?;
        let j = current_matrices(rates);
        let component = |jm: &Matrix2<f64>| {
            let mut out = [0.0; 4];
            for (k, g) in grad.iter().enumerate() {
                out[k] = contract(
                    jm,
                    &group_inverse_apply(rates, g).expect("gradient is zero-sum"),
                );
            }
            out
        };
        Ok(Self {
            right: component(&j.j_right),
            left: component(&j.j_left),
        })
    }

    pub fn of(&self, reservoir: Reservoir) -> &[f64; 4] {
        match reservoir {
            Reservoir::Left => &self.left,
            Reservoir::Right => &self.right,
        }
    }

    /// `(A_R · d, A_L · d)`.
    pub fn along(&self, direction: &[f64; 4]) -> (f64, f64) {
        let dot = |a: &[f64; 4]| a.iter().zip(direction).map(|(x, y)| x * y).sum::<f64>();
        (dot(&self.right), dot(&self.left))
    }
}

/// Vector potential projected on a unit direction of Γ-space, per
/// reservoir `(right, left)`.
pub fn vector_potential(rates: &Rates, direction: &[f64; 4]) -> Result<(f64, f64)> {
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    if norm.is_nan() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "direction must be a unit vector, |d| = {norm}"
        )));
    }
    Ok(VectorPotential::at(rates)?.along(direction))
}

/// Result of integrating the master equation in the periodic steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPumping {
    /// `(P₀, P₁)` over the accumulation window.
    pub trajectory: Trajectory,
    /// Charge per period, averaged over the accumulation window.
    pub pumped: PumpedCharge,
    pub final_state: TwoStateDistribution,
    pub period_map_iterations: usize,
}

/// ODE settings used by [`integrate_exact`] when the caller has no
/// preference.
pub fn default_exact_tolerance() -> Tolerance {
    Tolerance {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        max_steps: 50_000_000,
    }
}

fn run_periods(
    protocol: &RateProtocol,
    start: &Vector2<f64>,
    periods: usize,
    tol: &Tolerance,
) -> Result<Trajectory> {
    let t_end = protocol.period() * periods as f64;
    integrate_ode(
        |t, y, dy| {
            let r = protocol.rates_at(t);
            let (up, down) = (r.total_in(), r.total_out());
            dy[0] = -up * y[0] + down * y[1];
            dy[1] = up * y[0] - down * y[1];
            dy[2] = r.r_minus * y[1] - r.r_plus * y[0];
            dy[3] = r.l_minus * y[1] - r.l_plus * y[0];
        },
        &[start[0], start[1], 0.0, 0.0],
        (0.0, t_end),
        tol,
    )
}

/// Integrates `dP/dt = L(t)P` into its periodic steady state and returns
/// the charge pumped per period over `periods` further periods.
///
/// The periodic state is found by iterating the one-period map from
/// `π(0)` until `‖P(T) − P(0)‖ ≤ 1e-10`, for at most 1000 iterations.
pub fn integrate_exact(
    protocol: &RateProtocol,
    periods: usize,
    tol: &Tolerance,
) -> Result<ExactPumping> {
    if periods == 0 {
        return Err(Error::Domain("periods must be at least 1".into()));
    }
    let mut start = stationary_unchecked(&protocol.rates_at(0.0));
    let mut iterations = 0;
    loop {
        if iterations >= MAX_PERIOD_ITERATIONS {
            return Err(Error::Convergence(format!(
                "period map did not converge in {MAX_PERIOD_ITERATIONS} iterations"
            )));
        }
        iterations += 1;
        let traj = run_periods(protocol, &start, 1, tol)?;
        let end = traj.final_state();
        let next = Vector2::new(end[0], end[1]);
        let step = (next - start).norm();
        start = next;
        if step <= PERIODIC_TOL {
            break;
        }
    }

    let traj = run_periods(protocol, &start, periods, tol)?;
    let end = traj.final_state().to_vec();
    let per = periods as f64;
    let pumped = PumpedCharge::new(end[2] / per, end[3] / per, ChargeKind::Exact);
    let trajectory = Trajectory {
        times: traj.times,
        states: traj.states.into_iter().map(|s| vec![s[0], s[1]]).collect(),
    };
    Ok(ExactPumping {
        trajectory,
        pumped,
        final_state: TwoStateDistribution {
            p0: end[0],
            p1: end[1],
        },
        period_map_iterations: iterations,
    })
}

/// Charge per period carried by the instantaneous stationary state π(t).
pub fn dynamic_charge(protocol: &RateProtocol) -> Result<PumpedCharge> {
    let q = integrate_adaptive_vec(
        |t| {
            let r = protocol.rates_at(t);
            let pi = stationary_unchecked(&r);
            [
                current(&r, Reservoir::Right, &pi),
                current(&r, Reservoir::Left, &pi),
            ]
        },
        0.0,
        protocol.period(),
        QUADRATURE_TOL,
    )?;
    Ok(PumpedCharge::new(
        q.value[0],
        q.value[1],
        ChargeKind::Dynamic,
    ))
}

/// Charge per period carried by the first-order correction
/// `δπ = R dπ/dt`: the time integral of `⟨1| J_α R dπ/dt⟩` over one period.
/// Depends only on the closed contour traced in Γ-space, not on how fast
/// it is traversed.
pub fn geometric_charge(protocol: &RateProtocol) -> Result<PumpedCharge> {
    let q = integrate_adaptive_vec(
        |t| {
            let r = protocol.rates_at(t);
            let dpi = stationary_time_derivative(&r, &protocol.rate_derivatives_at(t));
            let delta = -dpi / r.total();
            let j = current_matrices(&r);
            [contract(&j.j_right, &delta), contract(&j.j_left, &delta)]
        },
        0.0,
        protocol.period(),
        QUADRATURE_TOL,
    )?;
    Ok(PumpedCharge::new(
        q.value[0],
        q.value[1],
        ChargeKind::Geometric,
    ))
}
