//! Dormand–Prince 5(4) with step rejection and FSAL stage reuse.

use crate::error::{Error, Result};

use super::Tolerance;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Accepted steps of an integration, including the initial point.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states
            .last()
            .expect("trajectory always holds the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self
            .times
            .last()
            .expect("trajectory always holds the initial time")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn error_norm(err: &[f64], y0: &[f64], y1: &[f64], tol: &Tolerance) -> f64 {
    let n = err.len() as f64;
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let sc = tol.abs_tol + tol.rel_tol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

/// Integrates `dy/dt = rhs(t, y)` over `t_span = (t0, t1)` with `t1 > t0`.
///
/// `rhs` writes the derivative into its third argument. Local error per
/// accepted step is held below `tol` in a mixed absolute/relative RMS norm.
/// The step count (accepted plus rejected) is capped by `tol.max_steps`.
pub fn integrate_ode<F>(
    mut rhs: F,
    y0: &[f64],
    t_span: (f64, f64),
    tol: &Tolerance,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::Domain(format!("invalid time span ({t0}, {t1})")));
    }
    if y0.is_empty() || y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(
            "initial state must be non-empty and finite".into(),
        ));
    }
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut traj = Trajectory {
        times: vec![t0],
        states: vec![y.clone()],
    };

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut err = vec![0.0; n];

    rhs(t, &y, &mut k1);

    // Initial step from the scale of y and y'.
    let span = t1 - t0;
    let d0 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let d1 = k1.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut h = if d0 > 1e-5 && d1 > 1e-5 {
        0.01 * d0 / d1
    } else {
        1e-6 * span.max(1.0)
    };
    h = h.min(span);

    let mut steps = 0usize;
    let mut prev_err = 1e-4f64;
    while t < t1 {
        if steps >= tol.max_steps {
            return Err(Error::IntegrationFailure {
                reason: format!("step limit {} exceeded", tol.max_steps),
                t,
                state: y,
                steps,
            });
        }
        steps += 1;
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        if h <= 1e-14 * t.abs().max(span) {
            return Err(Error::IntegrationFailure {
                reason: format!("step size underflow (h = {h:e})"),
                t,
                state: y,
                steps,
            });
        }

        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        rhs(t + C2 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(t + C3 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(t + C4 * h, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(t + C5 * h, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        rhs(t + h, &tmp, &mut k6);
        for i in 0..n {
            y_new[i] =
                y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        let t_new = if last { t1 } else { t + h };
        rhs(t_new, &y_new, &mut k7);
        for i in 0..n {
            err[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let e = error_norm(&err, &y, &y_new, tol);
        if !e.is_finite() {
            h *= MIN_FACTOR;
            continue;
        }

        if e <= 1.0 {
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            traj.times.push(t);
            traj.states.push(y.clone());
            // PI controller (Hairer's beta = 0.04).
            let factor = if e == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * e.powf(-0.2 + 0.04 * 0.75) * prev_err.powf(0.04))
                    .clamp(MIN_FACTOR, MAX_FACTOR)
            };
            prev_err = e.max(1e-4);
            h *= factor;
        } else {
            h *= (SAFETY * e.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(t: f64) -> Tolerance {
        Tolerance::new(t, t, 100_000).unwrap()
    }

    #[test]
    fn constant_solution() {
        let tr = integrate_ode(
            |_, _, dy| dy.fill(0.0),
            &[1.0, 0.0],
            (0.0, 3.0),
            &tol(1e-10),
        )
        .unwrap();
        assert_eq!(tr.final_state(), &[1.0, 0.0]);
        assert_eq!(tr.final_time(), 3.0);
    }

    #[test]
    fn exponential_decay() {
        let tr = integrate_ode(|_, y, dy| dy[0] = -y[0], &[1.0], (0.0, 1.0), &tol(1e-10)).unwrap();
        let exact = (-1.0f64).exp();
        assert!((tr.final_state()[0] - exact).abs() < 1e-9);
        assert!((exact - 0.367_879_4).abs() < 1e-7);
    }

    #[test]
    fn harmonic_oscillator_period() {
        let tau = std::f64::consts::TAU;
        let tr = integrate_ode(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            &[1.0, 0.0],
            (0.0, tau),
            &tol(1e-12),
        )
        .unwrap();
        let y = tr.final_state();
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos t, y(0) = 0  →  y = sin t
        let tr =
            integrate_ode(|t, _, dy| dy[0] = t.cos(), &[0.0], (0.0, 2.0), &tol(1e-12)).unwrap();
        assert!((tr.final_state()[0] - 2.0f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn step_limit_reports_last_state() {
        let t = Tolerance::new(1e-12, 1e-12, 5).unwrap();
        match integrate_ode(|_, y, dy| dy[0] = -y[0], &[1.0], (0.0, 100.0), &t) {
            Err(Error::IntegrationFailure { state, steps, .. }) => {
                assert_eq!(steps, 5);
                assert_eq!(state.len(), 1);
                assert!(state[0] > 0.0 && state[0] <= 1.0);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_degenerate_span() {
        assert!(integrate_ode(|_, _, dy| dy.fill(0.0), &[1.0], (1.0, 1.0), &tol(1e-8)).is_err());
    }

    #[test]
    fn deterministic() {
        let run = || {
            integrate_ode(
                |t, y, dy| dy[0] = -y[0] * t.sin(),
                &[0.3],
                (0.0, 7.0),
                &tol(1e-9),
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
