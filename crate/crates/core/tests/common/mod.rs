//! Checks shared by the invariant tests and the acceptance run.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use fzk::dispersion::{group_velocity, resonance};
use fzk::spectral::{dyadic_range, propagate, DispersionParams, DyadicShell, Family, Field, SpectralGrid};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Field with i.i.d. Gaussian coefficients (Hermitian-symmetrized when `real`).
pub fn random_field(grid: &SpectralGrid, seed: u64, real: bool) -> Field {
    let mut r = rng(seed);
    let coeffs: Vec<Complex64> = (0..grid.len()).map(|_| gaussian(&mut r)).collect();
    let f = Field::from_coefficients(grid, coeffs).expect("length matches grid");
    if real {
        f.hermitian_symmetrize()
    } else {
        f
    }
}

fn max_abs(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0, f64::max)
}

/// Relative max error of physical → spectral → physical.
pub fn roundtrip_error(grid: &SpectralGrid, seed: u64) -> f64 {
    let mut r = rng(seed);
    let values: Vec<Complex64> = (0..grid.len()).map(|_| gaussian(&mut r)).collect();
    let back = Field::from_physical_complex(grid, &values).unwrap().to_physical();
    let scale = max_abs(values.iter().map(|v| v.norm()));
    max_abs(values.iter().zip(&back).map(|(a, b)| (a - b).norm())) / scale
}

/// Relative max error of the real transform pair on real samples without
/// Nyquist content (real fields carry none).
pub fn roundtrip_error_real(grid: &SpectralGrid, seed: u64) -> f64 {
    let values = random_field(grid, seed, true).to_physical_real();
    let back = Field::from_physical(grid, &values).unwrap().to_physical_real();
    let scale = max_abs(values.iter().map(|v| v.abs()));
    max_abs(values.iter().zip(&back).map(|(a, b)| (a - b).abs())) / scale
}

/// `|‖û‖ − ‖u‖_{L²}| / ‖û‖`.
pub fn parseval_error(f: &Field) -> f64 {
    let spectral = f.l2_norm();
    (spectral - f.l2_norm_physical()).abs() / spectral
}

/// `max_ξ |Φ(ξ) + Σ_N χ_N(ξ) − 1|` over the lattice.
pub fn partition_error(grid: &SpectralGrid) -> f64 {
    let shells: Vec<DyadicShell> = dyadic_range(grid)
        .into_iter()
        .map(|n| DyadicShell::smooth(n).unwrap())
        .collect();
    max_abs((0..grid.len()).map(|i| {
        let r2 = grid.frequency_norm_sq(i);
        (shells.iter().map(|s| s.weight(r2)).sum::<f64>() - 1.0).abs()
    }))
}

/// Number of lattice points not covered by exactly one sharp shell.
pub fn sharp_tiling_defects(grid: &SpectralGrid) -> usize {
    let shells: Vec<DyadicShell> = dyadic_range(grid)
        .into_iter()
        .map(|n| DyadicShell::sharp(n).unwrap())
        .collect();
    (0..grid.len())
        .filter(|&i| {
            let r2 = grid.frequency_norm_sq(i);
            shells.iter().map(|s| s.weight(r2)).sum::<f64>() != 1.0
        })
        .count()
}

/// `‖S(t)S(s)f − S(t+s)f‖ / ‖f‖`.
pub fn group_law_error(f: &Field, s: f64, t: f64, params: &DispersionParams) -> f64 {
    let two = propagate(&propagate(f, s, params), t, params);
    let one = propagate(f, s + t, params);
    two.sub(&one).unwrap().l2_norm() / f.l2_norm()
}

/// Largest `|φ|` over the grid, for choosing times with bounded phases.
pub fn max_symbol(grid: &SpectralGrid, params: &DispersionParams) -> f64 {
    max_abs((0..grid.len()).map(|i| params.symbol(grid.frequency(i)).abs()))
}

/// `‖∇φ − D_h φ‖ / ‖∇φ‖` with the fourth-order central difference `D_h`.
///
/// The step along `ξⱼ` stays well inside `|ξⱼ|` so that the stencil does not
/// straddle the hyperplane `ξⱼ = 0`, where `|ξⱼ|^a` loses smoothness.
pub fn gradient_fd_error(params: &DispersionParams, xi: &[f64]) -> f64 {
    let g = group_velocity(params, xi).unwrap();
    let norm: f64 = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    let phi = |j: usize, d: f64| {
        let mut y = xi.to_vec();
        y[j] += d;
        params.symbol(&y)
    };
    let mut err = 0.0;
    for (j, gj) in g.iter().enumerate() {
        let h = 1e-3 * norm.min(xi[j].abs());
        let fd = (-phi(j, 2.0 * h) + 8.0 * phi(j, h) - 8.0 * phi(j, -h) + phi(j, -2.0 * h)) / (12.0 * h);
        err += (fd - gj).powi(2);
    }
    err.sqrt() / g.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Random nonzero frequency with log-uniform magnitude in `[0.1, 100]`.
pub fn random_frequency(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let dir: Vec<f64> = (0..n).map(|_| r.sample(StandardNormal)).collect();
        let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-3 {
            let mag = 10f64.powf(r.random_range(-1.0..2.0));
            return dir.iter().map(|x| x / len * mag).collect();
        }
    }
}

/// Relative defect of `Ω(ξ₁,ξ₂) + Ω(ξ₁+ξ₂,ξ₃) = Ω(ξ₂,ξ₃) + Ω(ξ₁,ξ₂+ξ₃)`.
pub fn cocycle_error(params: &DispersionParams, x1: &[f64], x2: &[f64], x3: &[f64]) -> f64 {
    let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p + q).collect::<Vec<_>>();
    let x12 = add(x1, x2);
    let x23 = add(x2, x3);
    let lhs = resonance(params, x1, x2) + resonance(params, &x12, x3);
    let rhs = resonance(params, x2, x3) + resonance(params, x1, &x23);
    let scale = [x1, x2, x3, &x12, &x23, &add(&x12, x3)]
        .iter()
        .map(|x| params.symbol(x).abs())
        .fold(0.0, f64::max);
    (lhs - rhs).abs() / scale
}

/// Families and dimensions on which the gradient is defined.
pub fn gradient_cases() -> Vec<(Family, usize)> {
    vec![
        (Family::Isotropic, 2),
        (Family::Isotropic, 3),
        (Family::MultiDirectional, 2),
        (Family::MultiDirectional, 3),
        (Family::RibaudVento, 2),
    ]
}
