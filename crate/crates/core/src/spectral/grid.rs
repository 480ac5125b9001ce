use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Largest total mode count a grid may hold (`Mⁿ`).
pub const MAX_MODES: usize = 1 << 22;

struct GridInner {
    n: usize,
    m: usize,
    period: f64,
    /// Signed integer wavevector of every flat index, `n` entries per mode.
    wavenumbers: Vec<i32>,
    /// Physical frequency `(2π/L)·k` of every flat index.
    frequencies: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Frequency lattice `{k : −M/2 ≤ kᵢ < M/2}` scaled by `2π/L`, paired with
/// the uniform physical sampling `xⱼ = j·L/M` of one periodic box.
///
/// Coefficient arrays are stored row-major (axis 0 slowest) in FFT-natural
/// order along each axis: index `i` carries wavenumber `i` for `i < M/2` and
/// `i − M` otherwise. Cloning is cheap.
#[derive(Clone)]
pub struct SpectralGrid {
    inner: Arc<GridInner>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.inner.n)
            .field("m", &self.inner.m)
            .field("period", &self.inner.period)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n
                && self.inner.m == other.inner.m
                && self.inner.period == other.inner.period)
    }
}

impl SpectralGrid {
    pub fn new(n: usize, m: usize, period: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("grid dimension must be >= 1".into()));
        }
        if m < 2 || m % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "modes per dimension must be even and >= 2 (got {m})"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParams(format!("period must be positive (got {period})")));
        }
        let total = m
            .checked_pow(n as u32)
            .filter(|&t| t <= MAX_MODES)
            .ok_or_else(|| Error::InvalidParams(format!("grid {m}^{n} exceeds the mode budget {MAX_MODES}")))?;

        let unit = 2.0 * std::f64::consts::PI / period;
        let mut wavenumbers = Vec::with_capacity(total * n);
        let mut frequencies = Vec::with_capacity(total * n);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            for &i in &idx {
                let k = if i < m / 2 { i as i64 } else { i as i64 - m as i64 };
                wavenumbers.push(k as i32);
                frequencies.push(unit * k as f64);
            }
            for d in (0..n).rev() {
                idx[d] += 1;
                if idx[d] < m {
                    break;
                }
                idx[d] = 0;
            }
        }

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        Ok(SpectralGrid {
            inner: Arc::new(GridInner {
                n,
                m,
                period,
                wavenumbers,
                frequencies,
                forward,
                inverse,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.n
    }

    pub fn modes_per_dim(&self) -> usize {
        self.inner.m
    }

    pub fn period(&self) -> f64 {
        self.inner.period
    }

    /// Total number of modes, `Mⁿ`.
    pub fn len(&self) -> usize {
        self.inner.wavenumbers.len() / self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn frequency_unit(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.inner.period
    }

    /// Physical cell volume `(L/M)ⁿ`.
    pub fn cell_volume(&self) -> f64 {
        (self.inner.period / self.inner.m as f64).powi(self.inner.n as i32)
    }

    /// Box volume `Lⁿ`.
    pub fn volume(&self) -> f64 {
        self.inner.period.powi(self.inner.n as i32)
    }

    /// Integer wavevector stored at `flat`.
    pub fn wavenumber(&self, flat: usize) -> &[i32] {
        let n = self.inner.n;
        &self.inner.wavenumbers[flat * n..(flat + 1) * n]
    }

    /// Physical frequency `(2π/L)·k` stored at `flat`.
    pub fn frequency(&self, flat: usize) -> &[f64] {
        let n = self.inner.n;
        &self.inner.frequencies[flat * n..(flat + 1) * n]
    }

    pub fn frequency_norm_sq(&self, flat: usize) -> f64 {
        self.frequency(flat).iter().map(|x| x * x).sum()
    }

    /// True for modes carrying the unpaired wavenumber `−M/2` in some axis.
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let half = (self.inner.m / 2) as i32;
        self.wavenumber(flat).iter().any(|&k| k == -half)
    }

    /// Flat index of an integer wavevector, if it lies on the lattice.
    pub fn flat_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.inner.n {
            return None;
        }
        let m = self.inner.m as i64;
        let mut flat = 0usize;
        for &kd in k {
            if kd < -m / 2 || kd >= m / 2 {
                return None;
            }
            flat = flat * self.inner.m + kd.rem_euclid(m) as usize;
        }
        Some(flat)
    }

    /// Flat index of `−k` (wrapping the Nyquist wavenumber onto itself).
    pub fn negated_index(&self, flat: usize) -> usize {
        let m = self.inner.m;
        let mut out = 0usize;
        let mut rest = flat;
        let mut stride = 1usize;
        for _ in 0..self.inner.n {
            let i = rest % m;
            rest /= m;
            out += ((m - i) % m) * stride;
            stride *= m;
        }
        out
    }

    /// Largest `|ξ|` on the lattice (a corner of the frequency box).
    pub fn max_frequency(&self) -> f64 {
        self.frequency_unit() * (self.inner.m / 2) as f64 * (self.inner.n as f64).sqrt()
    }

    /// Physical sample coordinates of the flat index `flat`.
    pub fn position(&self, flat: usize) -> Vec<f64> {
        let m = self.inner.m;
        let h = self.inner.period / m as f64;
        let mut x = vec![0.0; self.inner.n];
        let mut rest = flat;
        for d in (0..self.inner.n).rev() {
            x[d] = (rest % m) as f64 * h;
            rest /= m;
        }
        x
    }

    /// Unnormalised forward DFT over every axis, in place.
    pub fn fft_forward(&self, data: &mut [num_complex::Complex64]) {
        self.transform(data, &*self.inner.forward);
    }

    /// Unnormalised inverse DFT over every axis, in place.
    pub fn fft_inverse(&self, data: &mut [num_complex::Complex64]) {
        self.transform(data, &*self.inner.inverse);
    }

    fn transform(&self, data: &mut [Complex64], fft: &dyn Fft<f64>) {
        let m = self.inner.m;
        let n = self.inner.n;
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        // last axis is contiguous
        fft.process_with_scratch(data, &mut scratch);
        if n == 1 {
            return;
        }
        let total = data.len();
        let mut lines = vec![Complex64::new(0.0, 0.0); total];
        for axis in (0..n - 1).rev() {
            let stride = m.pow((n - 1 - axis) as u32);
            let block = stride * m;
            // gather every line along `axis` into contiguous storage
            let mut line = 0;
            for base in (0..total).step_by(block) {
                for off in 0..stride {
                    let dst = &mut lines[line * m..(line + 1) * m];
                    for (j, d) in dst.iter_mut().enumerate() {
                        *d = data[base + off + j * stride];
                    }
                    line += 1;
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            let mut line = 0;
            for base in (0..total).step_by(block) {
                for off in 0..stride {
                    let src = &lines[line * m..(line + 1) * m];
                    for (j, s) in src.iter().enumerate() {
                        data[base + off + j * stride] = *s;
                    }
                    line += 1;
                }
            }
        }
    }
}

/// Unnormalised DFT over every axis of a row-major array of arbitrary shape.
pub(crate) fn fft_nd(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let total: usize = shape.iter().product();
    assert_eq!(data.len(), total, "buffer does not match shape");
    let mut planner = FftPlanner::new();
    let mut lines = vec![Complex64::new(0.0, 0.0); total];
    let mut stride = 1usize;
    for axis in (0..shape.len()).rev() {
        let m = shape[axis];
        let fft = if inverse {
            planner.plan_fft_inverse(m)
        } else {
            planner.plan_fft_forward(m)
        };
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
        } else {
            let block = stride * m;
            let mut line = 0;
            for base in (0..total).step_by(block) {
                for off in 0..stride {
                    for j in 0..m {
                        lines[line * m + j] = data[base + off + j * stride];
                    }
                    line += 1;
                }
            }
            fft.process_with_scratch(&mut lines, &mut scratch);
            let mut line = 0;
            for base in (0..total).step_by(block) {
                for off in 0..stride {
                    for j in 0..m {
                        data[base + off + j * stride] = lines[line * m + j];
                    }
                    line += 1;
                }
            }
        }
        stride *= m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_oversized() {
        assert!(SpectralGrid::new(2, 7, 1.0).is_err());
        assert!(SpectralGrid::new(2, 0, 1.0).is_err());
        assert!(SpectralGrid::new(3, 1024, 1.0).is_err());
        assert!(SpectralGrid::new(2, 8, -1.0).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = SpectralGrid::new(3, 8, 2.0 * std::f64::consts::PI).unwrap();
        for flat in 0..g.len() {
            let k: Vec<i64> = g.wavenumber(flat).iter().map(|&v| v as i64).collect();
            assert_eq!(g.flat_index(&k), Some(flat));
            let neg = g.negated_index(flat);
            if !g.is_nyquist(flat) {
                let kn: Vec<i64> = g.wavenumber(neg).iter().map(|&v| v as i64).collect();
                assert_eq!(kn, k.iter().map(|v| -v).collect::<Vec<_>>());
            }
        }
        assert_eq!(g.flat_index(&[4, 0, 0]), None);
        assert_eq!(g.flat_index(&[-4, 0, 0]).map(|f| g.is_nyquist(f)), Some(true));
    }

    #[test]
    fn fft_matches_naive_dft() {
        let g = SpectralGrid::new(2, 6, 1.0).unwrap();
        let data: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut fast = data.clone();
        g.fft_forward(&mut fast);
        let m = 6;
        for k0 in 0..m {
            for k1 in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for j0 in 0..m {
                    for j1 in 0..m {
                        let ang = -2.0 * std::f64::consts::PI * ((k0 * j0 + k1 * j1) as f64) / m as f64;
                        acc += data[j0 * m + j1] * Complex64::from_polar(1.0, ang);
                    }
                }
                assert!((acc - fast[k0 * m + k1]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fft_nd_matches_grid_transform() {
        let g = SpectralGrid::new(2, 6, 1.0).unwrap();
        let data: Vec<Complex64> = (0..36)
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let mut a = data.clone();
        let mut b = data;
        g.fft_forward(&mut a);
        fft_nd(&mut b, &[6, 6], false);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
        // non-square shape against a direct sum
        let shape = [3usize, 5];
        let data: Vec<Complex64> = (0..15).map(|i| Complex64::new(i as f64, -(i as f64) * 0.5)).collect();
        let mut c = data.clone();
        fft_nd(&mut c, &shape, false);
        for p in 0..3 {
            for q in 0..5 {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..3 {
                    for k in 0..5 {
                        let ang = -2.0 * std::f64::consts::PI * ((p * j) as f64 / 3.0 + (q * k) as f64 / 5.0);
                        acc += data[j * 5 + k] * Complex64::from_polar(1.0, ang);
                    }
                }
                assert!((acc - c[p * 5 + q]).norm() < 1e-10);
            }
        }
    }
}
