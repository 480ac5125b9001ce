use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::spectral::{Field, SpectralGrid};

/// Real random datum with Gaussian coefficients weighted by
/// `(1+|ξ|²)^{−(r + n/2 + 1/2)/2}`, so it lies in `H^r` with half a
/// derivative to spare and no more. Modes with some `|kⱼ| > max_k` are left
/// empty.
pub fn random_datum(grid: &SpectralGrid, regularity: f64, max_k: Option<i64>, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let power = -(regularity + 0.5 * grid.dim() as f64 + 0.5) / 2.0;
    let limit = max_k.unwrap_or(i64::MAX);
    let coeffs = (0..grid.len())
        .map(|i| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let inside = grid.wavenumber(i).iter().all(|&v| (v as i64).abs() <= limit);
            if inside {
                Complex64::new(re, im) * (1.0 + grid.frequency_norm_sq(i)).powf(power)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Field::from_coefficients(grid, coeffs)
        .expect("grid-sized buffer")
        .hermitian_symmetrize()
}

/// `f` rescaled to unit `H^s` norm.
pub fn normalize_sobolev(f: &Field, s: f64) -> Field {
    let norm = crate::spectral::sobolev_norm(f, s);
    if norm == 0.0 {
        f.clone()
    } else {
        f.scale(1.0 / norm)
    }
}
