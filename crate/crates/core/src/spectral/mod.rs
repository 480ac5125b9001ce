//! Grids, transforms, Littlewood-Paley projectors, norms and the free propagator.

mod field;
pub(crate) mod grid;
pub mod io;
mod ops;
mod params;
mod shell;

pub use field::{Field, HERMITIAN_TOL};
pub use grid::{SpectralGrid, MAX_MODES};
pub use ops::{anisotropic_norm, apply_x1_derivative, phase_table, propagate, sobolev_norm};
pub use params::{symbol_multiplier, DispersionParams, Family};
pub use shell::{annular_bump, dyadic_range, low_pass, lp_project, max_dyadic, transition, Cutoff, DyadicShell};
