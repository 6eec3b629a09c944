//! Shared numerical plumbing: special functions, ODE integration,
//! quadrature, 2×2 null-space solves and derivative-free maximization.
//!
//! Everything here is a pure function of its inputs. Nothing consumes
//! entropy, so identical inputs always produce bit-identical outputs.

mod diff;
mod linalg;
mod ode;
mod optimize;
mod quadrature;
mod special;

pub use diff::{central_difference, partial_derivatives_2d};
pub use linalg::null_vector_2;
pub use ode::{integrate_ode, Trajectory};
pub use optimize::{maximize_1d, maximize_2d, Maximum1d, Maximum2d};
pub use quadrature::{integrate_adaptive, integrate_adaptive_vec, Quadrature};
pub use special::{coth, coth_difference, tanh};

use serde::Serialize;

use crate::error::{Error, Result};

/// Error-control settings shared by the iterative routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_steps: usize) -> Result<Self> {
        let valid = abs_tol.is_finite()
            && rel_tol.is_finite()
            && abs_tol >= 0.0
            && rel_tol >= 0.0
            && abs_tol + rel_tol > 0.0
            && max_steps > 0;
        if !valid {
            return Err(Error::Domain(format!(
                "invalid tolerance: abs_tol={abs_tol}, rel_tol={rel_tol}, max_steps={max_steps}"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_steps,
        })
    }

    /// Bound used for a value of magnitude `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_steps: 1_000_000,
        }
    }
}
