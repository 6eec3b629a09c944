//! Derivative-free maximization.
//!
//! `maximize_2d` runs Nelder–Mead on the logarithms of the two coordinates,
//! so iterates stay in the open positive quadrant and "escaping to the
//! boundary" becomes "log-coordinate running off to ±∞".

use crate::error::{Error, Result};

use super::diff::partial_derivatives_2d;
use super::Tolerance;

/// Log-distance from the initial guess beyond which the search is declared
/// to have left the interior (a factor of e^40 ≈ 2e17).
const ESCAPE_LOG_DISTANCE: f64 = 40.0;
const RESTARTS: usize = 3;
const FD_REL_STEP: f64 = 1e-5;
const STATIONARITY_FACTOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum2d {
    pub argmax: (f64, f64),
    pub value: f64,
    /// Central-difference gradient at `argmax`.
    pub gradient: (f64, f64),
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum1d {
    pub argmax: f64,
    pub value: f64,
    pub iterations: usize,
}

struct SimplexResult {
    best: [f64; 2],
    value: f64,
    iterations: usize,
}

/// Minimizes `g` with a standard Nelder–Mead (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2).
fn nelder_mead<G: Fn([f64; 2]) -> f64>(
    g: &G,
    start: [f64; 2],
    step: f64,
    origin: [f64; 2],
    tol: &Tolerance,
) -> Result<SimplexResult> {
    let eval = |p: [f64; 2]| {
        let v = g(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut pts = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut vals = pts.map(eval);
    let mut iterations = 0;

    loop {
        // Order: pts[0] best (lowest), pts[2] worst.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);

        for p in &pts {
            if (p[0] - origin[0]).abs() > ESCAPE_LOG_DISTANCE
                || (p[1] - origin[1]).abs() > ESCAPE_LOG_DISTANCE
            {
                return Err(Error::NoInteriorMaximum(format!(
                    "iterate ({:e}, {:e}) escaped towards the boundary of the positive quadrant",
                    p[0].exp(),
                    p[1].exp()
                )));
            }
        }

        let size = pts[1..]
            .iter()
            .map(|p| (p[0] - pts[0][0]).abs().max((p[1] - pts[0][1]).abs()))
            .fold(0.0f64, f64::max);
        let spread = (vals[2] - vals[0]).abs();
        let x_scale = pts[0][0].abs().max(pts[0][1].abs());
        let converged_x = size <= tol.bound(x_scale);
        let converged_f = spread <= tol.bound(vals[0]);
        if (converged_x && converged_f) || size < 1e-15 || (spread == 0.0 && size <= 1e-8) {
            return Ok(SimplexResult {
                best: pts[0],
                value: vals[0],
                iterations,
            });
        }
        if iterations >= tol.max_steps {
            return Err(Error::Convergence(format!(
                "simplex did not converge in {} iterations (size {size:e})",
                tol.max_steps
            )));
        }
        iterations += 1;

        let centroid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
        let along = |t: f64| {
            [
                centroid[0] + t * (pts[2][0] - centroid[0]),
                centroid[1] + t * (pts[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = eval(reflected);
        if fr < vals[0] {
            let expanded = along(-2.0);
            let fe = eval(expanded);
            if fe < fr {
                pts[2] = expanded;
                vals[2] = fe;
            } else {
                pts[2] = reflected;
                vals[2] = fr;
            }
            continue;
        }
        if fr < vals[1] {
            pts[2] = reflected;
            vals[2] = fr;
            continue;
        }
        let (contracted, fc) = if fr < vals[2] {
            let c = along(-0.5);
            (c, eval(c))
        } else {
            let c = along(0.5);
            (c, eval(c))
        };
        if fc < vals[2].min(fr) {
            pts[2] = contracted;
            vals[2] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        for i in 1..3 {
            pts[i] = [
                pts[0][0] + 0.5 * (pts[i][0] - pts[0][0]),
                pts[0][1] + 0.5 * (pts[i][1] - pts[0][1]),
            ];
            vals[i] = eval(pts[i]);
        }
    }
}

/// Maximizes `f(x, y)` over the open positive quadrant starting at `guess`.
///
/// The returned point is checked for stationarity with central differences
/// (step `1e-5` times each coordinate): each log-scaled partial
/// `|x ∂f/∂x|` must be at most `1e-6` times the larger of `|f(argmax)|` and
/// the objective's improvement over the guess. A point that fails this check
/// is reported as a convergence error rather than returned.
pub fn maximize_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    guess: (f64, f64),
    tol: &Tolerance,
) -> Result<Maximum2d> {
    if !(guess.0.is_finite() && guess.1.is_finite() && guess.0 > 0.0 && guess.1 > 0.0) {
        return Err(Error::Domain(format!(
            "initial guess must lie in the open positive quadrant, got {guess:?}"
        )));
    }
    let g = |p: [f64; 2]| -f(p[0].exp(), p[1].exp());
    let origin = [guess.0.ln(), guess.1.ln()];
    let f_guess = f(guess.0, guess.1);

    let mut best = nelder_mead(&g, origin, 0.5, origin, tol)?;
    let mut iterations = best.iterations;
    for _ in 0..RESTARTS {
        let again = nelder_mead(&g, best.best, 0.05, origin, tol)?;
        iterations += again.iterations;
        let improved = again.value < best.value;
        if improved {
            best = again;
        } else {
            break;
        }
    }

    let argmax = (best.best[0].exp(), best.best[1].exp());
    let value = f(argmax.0, argmax.1);
    if !value.is_finite() {
        return Err(Error::Convergence(
            "objective is not finite at the optimum".into(),
        ));
    }
    let gradient = partial_derivatives_2d(&f, argmax, FD_REL_STEP);
    let scale = value.abs().max((value - f_guess).abs());
    let bound = STATIONARITY_FACTOR * scale;
    let (sx, sy) = (gradient.0 * argmax.0, gradient.1 * argmax.1);
    if sx.abs() > bound || sy.abs() > bound {
        return Err(Error::Convergence(format!(
            "point ({:e}, {:e}) is not stationary: scaled partials ({sx:e}, {sy:e}) exceed {bound:e}",
            argmax.0, argmax.1
        )));
    }
    Ok(Maximum2d {
        argmax,
        value,
        gradient,
        iterations,
    })
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
pub fn maximize_1d<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: &Tolerance,
) -> Result<Maximum1d> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while (b - a) > tol.bound(0.5 * (a + b)) {
        if iterations >= tol.max_steps {
            return Err(Error::Convergence(format!(
                "golden section did not converge in {} iterations",
                tol.max_steps
            )));
        }
        iterations += 1;
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let argmax = 0.5 * (a + b);
    Ok(Maximum1d {
        argmax,
        value: f(argmax),
        iterations,
    })
}
