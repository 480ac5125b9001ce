//! Pseudospectral time integration of the full equation, conservation
//! diagnostics and the Bona-Smith truncation experiment.
//!
//! The nonlinearity is evaluated in divergence form `(1/2)∂ₓ₁(u²)`, which
//! keeps the discrete mass invariant under dealiasing.

mod bona_smith;
mod convergence;
mod datum;
mod diagnostics;
mod solver;

pub use bona_smith::{bona_smith, BonaSmithRow, BonaSmithTable};
pub use convergence::{self_convergence, ConvergenceReport};
pub use datum::{normalize_sobolev, random_datum};
pub use diagnostics::{energy, mass, Diagnostics, Energy, Snapshot, Trajectory};
pub use solver::{nonlinearity, solve, step, time_reverse, Dealias, Integrator, Solver, SolverConfig, PHASE_BOUND};
