//! Pseudospectral laboratory for fractional Zakharov-Kuznetsov equations
//!
//! ```text
//! ∂ₜu + ∂ₓ₁(−Δ)^{a/2}u = u ∂ₓ₁u,    1 ≤ a ≤ 2,  x ∈ Tⁿ
//! ```
//!
//! The crate evolves solutions on periodic boxes and checks dispersive,
//! bilinear and transversality estimates numerically:
//!
//! - [`spectral`]: grids, FFTs, dyadic projectors, Sobolev norms, the free flow
//! - [`dispersion`]: group velocities, the resonance function, transversality scans
//! - [`estimates`]: kernel decay, linear and bilinear Strichartz ratios
//! - [`evolution`]: integrating-factor RK4 solver, conservation, Bona-Smith runs
//! - [`harness`]: reproducible experiment runs with CSV/JSON/SVG artifacts

pub mod dispersion;
pub mod error;
pub mod estimates;
pub mod evolution;
pub mod harness;
pub mod spectral;

pub use error::{Error, Result};
