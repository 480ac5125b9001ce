use num_complex::Complex64;

use super::grid::SpectralGrid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hermitian symmetry tolerance (relative to the largest coefficient).
pub const HERMITIAN_TOL: f64 = 1e-12;

/// One spatial snapshot, stored as Fourier coefficients on a [`SpectralGrid`].
///
/// Coefficients use the unitary normalisation
/// `u(x) = L^{−n/2} Σₖ û(k) e^{iξ(k)·x}`, so `‖u‖_{L²} = (Σ|û|²)^{1/2}` without
/// extra factors. A field flagged real satisfies `û(−k) = conj(û(k))` and has
/// its Nyquist modes zeroed.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: SpectralGrid,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl Field {
    pub fn zeros(grid: &SpectralGrid, real: bool) -> Self {
        Field {
            grid: grid.clone(),
            coeffs: vec![ZERO; grid.len()],
            real,
        }
    }

    /// Complex field from coefficients in grid storage order.
    pub fn from_coefficients(grid: &SpectralGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidParams(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(Field {
            grid: grid.clone(),
            coeffs,
            real: false,
        })
    }

    /// Real field from coefficients; fails unless they are Hermitian symmetric
    /// with vanishing Nyquist modes.
    pub fn from_coefficients_real(grid: &SpectralGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        let mut f = Self::from_coefficients(grid, coeffs)?;
        f.real = true;
        let defect = f.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidParams(format!(
                "coefficients are not Hermitian symmetric (defect {defect:e})"
            )));
        }
        Ok(f)
    }

    /// Complex field holding the listed `(wavevector, coefficient)` pairs.
    pub fn from_modes(grid: &SpectralGrid, modes: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        let mut f = Self::zeros(grid, false);
        for (k, c) in modes {
            let idx = grid
                .flat_index(k)
                .ok_or_else(|| Error::InvalidParams(format!("wavevector {k:?} not on grid")))?;
            f.coeffs[idx] += *c;
        }
        Ok(f)
    }

    /// Real field `Σ c e^{ik·x} + conj(c) e^{−ik·x}` over the listed modes.
    pub fn real_from_modes(grid: &SpectralGrid, modes: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        let mut f = Self::zeros(grid, true);
        for (k, c) in modes {
            let idx = grid
                .flat_index(k)
                .filter(|&i| !grid.is_nyquist(i))
                .ok_or_else(|| Error::InvalidParams(format!("wavevector {k:?} not on grid")))?;
            let neg = grid.negated_index(idx);
            if neg == idx {
                f.coeffs[idx] += Complex64::new(2.0 * c.re, 0.0);
            } else {
                f.coeffs[idx] += *c;
                f.coeffs[neg] += c.conj();
            }
        }
        Ok(f)
    }

    /// Real field from physical samples at `xⱼ = j·L/M` (row-major).
    pub fn from_physical(grid: &SpectralGrid, values: &[f64]) -> Result<Self> {
        let data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut f = Self::from_physical_complex(grid, &data)?;
        f.real = true;
        f.enforce_hermitian();
        Ok(f)
    }

    pub fn from_physical_complex(grid: &SpectralGrid, values: &[Complex64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParams(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        let mut data = values.to_vec();
        grid.fft_forward(&mut data);
        let scale = grid.volume().sqrt() / grid.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
        Ok(Field {
            grid: grid.clone(),
            coeffs: data,
            real: false,
        })
    }

    /// Real field sampled from `f(x)` on the physical lattice.
    pub fn from_fn(grid: &SpectralGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values: Vec<f64> = (0..grid.len()).map(|i| f(&grid.position(i))).collect();
        Self::from_physical(grid, &values).expect("length matches grid")
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Coefficient at integer wavevector `k` (zero off the lattice).
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.grid.flat_index(k).map_or(ZERO, |i| self.coeffs[i])
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest `|û(−k) − conj(û(k))|` (plus Nyquist magnitudes) relative to the
    /// largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.coeffs.len() {
            if self.grid.is_nyquist(i) {
                worst = worst.max(self.coeffs[i].norm());
            } else {
                let j = self.grid.negated_index(i);
                worst = worst.max((self.coeffs[j] - self.coeffs[i].conj()).norm());
            }
        }
        worst / scale
    }

    /// Projects onto real fields: `û(k) ← (û(k) + conj(û(−k)))/2`, Nyquist zeroed.
    pub fn hermitian_symmetrize(&self) -> Field {
        let mut f = self.clone();
        f.real = true;
        f.enforce_hermitian();
        f
    }

    fn enforce_hermitian(&mut self) {
        let old = self.coeffs.clone();
        for i in 0..old.len() {
            if self.grid.is_nyquist(i) {
                self.coeffs[i] = ZERO;
            } else {
                let j = self.grid.negated_index(i);
                self.coeffs[i] = 0.5 * (old[i] + old[j].conj());
            }
        }
    }

    /// Physical samples `u(xⱼ)`.
    pub fn to_physical(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        self.grid.fft_inverse(&mut data);
        let scale = 1.0 / self.grid.volume().sqrt();
        data.iter_mut().for_each(|c| *c *= scale);
        data
    }

    /// Real parts of the physical samples.
    pub fn to_physical_real(&self) -> Vec<f64> {
        self.to_physical().into_iter().map(|c| c.re).collect()
    }

    /// Applies a Fourier multiplier `m(flat)` coefficient-wise. The caller states
    /// whether `m(−k) = conj(m(k))`, which keeps real fields real.
    pub fn apply_multiplier(&self, hermitian: bool, m: impl Fn(usize) -> Complex64) -> Field {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if c == ZERO { ZERO } else { c * m(i) })
            .collect();
        Field {
            grid: self.grid.clone(),
            coeffs,
            real: self.real && hermitian,
        }
    }

    /// Real-valued Fourier multiplier that is even in `k`.
    pub fn apply_even_real_multiplier(&self, m: impl Fn(usize) -> f64) -> Field {
        self.apply_multiplier(true, |i| Complex64::new(m(i), 0.0))
    }

    pub fn scale(&self, lambda: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * lambda).collect(),
            real: self.real,
        }
    }

    /// `self + lambda·other`.
    pub fn axpy(&self, lambda: f64, other: &Field) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Field {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b * lambda)
                .collect(),
            real: self.real && other.real,
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.axpy(-1.0, other)
    }

    /// Spectral L² norm `(Σ|û|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Physical L² norm `(Σⱼ |u(xⱼ)|² (L/M)ⁿ)^{1/2}`.
    pub fn l2_norm_physical(&self) -> f64 {
        let vol = self.grid.cell_volume();
        (self.to_physical().iter().map(|c| c.norm_sqr()).sum::<f64>() * vol).sqrt()
    }

    /// Reflection `u(x₁, x') → u(−x₁, x')`.
    pub fn reflect_x1(&self) -> Field {
        let grid = &self.grid;
        let mut coeffs = vec![ZERO; self.coeffs.len()];
        let m = grid.modes_per_dim() as i64;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let mut k: Vec<i64> = grid.wavenumber(i).iter().map(|&v| v as i64).collect();
            k[0] = -k[0];
            if k[0] == m / 2 {
                k[0] = -m / 2;
            }
            coeffs[grid.flat_index(&k).expect("reflected mode on lattice")] = c;
        }
        Field {
            grid: grid.clone(),
            coeffs,
            real: self.real,
        }
    }

    /// Largest coefficient-wise difference relative to the larger field's scale.
    pub fn relative_distance(&self, other: &Field) -> f64 {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        if scale == 0.0 {
            return 0.0;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
            / scale
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub(crate) fn from_raw(grid: &SpectralGrid, coeffs: Vec<Complex64>, real: bool) -> Field {
        debug_assert_eq!(coeffs.len(), grid.len());
        Field {
            grid: grid.clone(),
            coeffs,
            real,
        }
    }
}
