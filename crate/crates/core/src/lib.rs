//! Numerical models of quantum heat engines and adiabatic phases.
//!
//! The crate covers four threads that share one set of numerical tools:
//!
//! * [`otto`]: the harmonic-oscillator Otto cycle and its efficiency at
//!   maximum work output,
//! * [`carnot`]: the spin-1/2 Carnot cycle, reversible and in the
//!   low-dissipation finite-time model,
//! * [`pump`]: a periodically driven two-state quantum dot with the split of
//!   pumped charge into dynamic and geometric parts,
//! * [`phase`]: dynamical, Berry and gauge-invariant non-cyclic geometric
//!   phases of two-level states.
//!
//! Units follow ħ = k_B = 1 unless an operation takes an explicit `hbar`.

pub mod carnot;
pub mod error;
pub mod numerics;
pub mod otto;
pub mod phase;
pub mod pump;

pub use error::{Error, Result};
pub use numerics::Tolerance;

/// Version tag of the sign/label conventions used by the models. Reports
/// echo it so that results produced under different conventions are never
/// silently compared.
pub const CONVENTIONS_VERSION: &str = "phasecycle-conventions/1";
