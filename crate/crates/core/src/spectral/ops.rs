use num_complex::Complex64;

use super::field::Field;
use super::params::DispersionParams;
use crate::error::{Error, Result};

/// Free evolution `S(t)f`: multiplies `û(ξ)` by `e^{−itφ(ξ)}`.
///
/// φ is odd, so the multiplier is Hermitian and real fields stay real.
pub fn propagate(f: &Field, t: f64, params: &DispersionParams) -> Field {
    if t == 0.0 {
        return f.clone();
    }
    let grid = f.grid();
    f.apply_multiplier(true, |i| {
        let phase = -t * params.symbol(grid.frequency(i));
        Complex64::from_polar(1.0, phase)
    })
}

/// Table of `e^{−iτφ(ξ)}` per flat index, for repeated propagation by a fixed step.
pub fn phase_table(f_grid: &super::grid::SpectralGrid, tau: f64, params: &DispersionParams) -> Vec<Complex64> {
    (0..f_grid.len())
        .map(|i| Complex64::from_polar(1.0, -tau * params.symbol(f_grid.frequency(i))))
        .collect()
}

/// `∂ₓ₁ f`: multiplies by `iξ₁`.
pub fn apply_x1_derivative(f: &Field) -> Field {
    let grid = f.grid();
    f.apply_multiplier(true, |i| Complex64::new(0.0, grid.frequency(i)[0]))
}

/// `(Σ (1+|ξ|²)^s |û(ξ)|²)^{1/2}`.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    let grid = f.grid();
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (1.0 + grid.frequency_norm_sq(i)).powf(s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `H^{s,0}(T²)` norm: `(Σ (1+ξ₁²)^s |û(ξ₁,ξ₂)|²)^{1/2}`.
pub fn anisotropic_norm(f: &Field, s: f64) -> Result<f64> {
    let grid = f.grid();
    if grid.dim() != 2 {
        return Err(Error::AnisotropicDimension(grid.dim()));
    }
    Ok(f.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let x1 = grid.frequency(i)[0];
            (1.0 + x1 * x1).powf(s) * c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt())
}
