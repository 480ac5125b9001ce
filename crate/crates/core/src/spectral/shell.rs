//! Inhomogeneous Littlewood-Paley projectors.
//!
//! Smooth shells use the transition profile
//!
//! ```text
//! ψ(r) = 1                                   r ≤ 1
//! ψ(r) = g(2 − r) / (g(2 − r) + g(r − 1))    1 < r < 2,   g(s) = e^{−1/s}
//! ψ(r) = 0                                   r ≥ 2
//! ```
//!
//! with `Φ(ξ) = ψ(|ξ|)` and `χ_N(ξ) = ψ(|ξ|/N) − ψ(2|ξ|/N)` for `N ≥ 2`. The sum
//! `Φ + Σ_{N ≤ N*} χ_N` telescopes to `ψ(|ξ|/N*)`, which is identically one
//! on every lattice point once `N*` reaches the largest lattice frequency.
//! `supp Φ ⊆ B(0,2)` and `supp χ_N ⊆ B(0,2N) \ B(0,N/2)`.
//!
//! Sharp shells are indicator functions of `|ξ| < √2` (`N = 1`) and
//! `N/√2 ≤ |ξ| < √2·N` (`N ≥ 2`): they tile the lattice and sit inside the
//! same annuli as the smooth ones.

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::grid::SpectralGrid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cutoff {
    Sharp,
    Smooth,
}

/// Dyadic frequency shell `|ξ| ≈ N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicShell {
    pub n: u32,
    pub cutoff: Cutoff,
}

impl DyadicShell {
    pub fn new(n: u32, cutoff: Cutoff) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidParams(format!("shell index {n} is not a dyadic integer")));
        }
        Ok(DyadicShell { n, cutoff })
    }

    pub fn sharp(n: u32) -> Result<Self> {
        Self::new(n, Cutoff::Sharp)
    }

    pub fn smooth(n: u32) -> Result<Self> {
        Self::new(n, Cutoff::Smooth)
    }

    /// Multiplier value at frequency magnitude squared `r2 = |ξ|²`.
    pub fn weight(&self, r2: f64) -> f64 {
        let nn = self.n as f64;
        match self.cutoff {
            Cutoff::Sharp => {
                let upper = 2.0 * nn * nn;
                let lower = if self.n == 1 { 0.0 } else { 0.5 * nn * nn };
                if r2 >= lower && r2 < upper {
                    1.0
                } else {
                    0.0
                }
            }
            Cutoff::Smooth => {
                let r = r2.sqrt();
                if self.n == 1 {
                    transition(r)
                } else {
                    transition(r / nn) - transition(2.0 * r / nn)
                }
            }
        }
    }

    /// Inner and outer radius of the support (`[lo, hi)`).
    pub fn support(&self) -> (f64, f64) {
        let nn = self.n as f64;
        match (self.cutoff, self.n) {
            (Cutoff::Sharp, 1) => (0.0, std::f64::consts::SQRT_2),
            (Cutoff::Sharp, _) => (nn / std::f64::consts::SQRT_2, nn * std::f64::consts::SQRT_2),
            (Cutoff::Smooth, 1) => (0.0, 2.0),
            (Cutoff::Smooth, _) => (nn / 2.0, 2.0 * nn),
        }
    }
}

/// Smooth monotone transition: one on `[0, 1]`, zero on `[2, ∞)`.
pub fn transition(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let g = |s: f64| (-1.0 / s).exp();
        let up = g(2.0 - r);
        up / (up + g(r - 1.0))
    }
}

/// Radial bump supported in `(1/2, 2)`: the `N = 1` annular piece `ψ(r) − ψ(2r)`.
pub fn annular_bump(r: f64) -> f64 {
    transition(r) - transition(2.0 * r)
}

/// Smallest dyadic `N` with `N ≥ max|ξ|` over the lattice; every shell up to
/// it together covers the grid.
pub fn max_dyadic(grid: &SpectralGrid) -> u32 {
    let top = grid.max_frequency();
    let mut n = 1u32;
    while (n as f64) < top {
        n *= 2;
    }
    n
}

/// All dyadic shells `1, 2, 4, …, max_dyadic(grid)`.
pub fn dyadic_range(grid: &SpectralGrid) -> Vec<u32> {
    let top = max_dyadic(grid);
    std::iter::successors(Some(1u32), |&n| (n < top).then_some(n * 2)).collect()
}

/// `P_N f`.
pub fn lp_project(f: &Field, shell: DyadicShell) -> Result<Field> {
    let grid = f.grid();
    let max = max_dyadic(grid);
    if shell.n > max {
        return Err(Error::ShellBeyondGrid { shell: shell.n, max });
    }
    Ok(f.apply_even_real_multiplier(|i| shell.weight(grid.frequency_norm_sq(i))))
}

/// `P_{≤N} f = Σ_{M ≤ N} P_M f`.
pub fn low_pass(f: &Field, n: u32, cutoff: Cutoff) -> Result<Field> {
    let top = DyadicShell::new(n, cutoff)?;
    let grid = f.grid();
    let max = max_dyadic(grid);
    if n > max {
        return Err(Error::ShellBeyondGrid { shell: n, max });
    }
    let nn = top.n as f64;
    Ok(f.apply_even_real_multiplier(|i| {
        let r2 = grid.frequency_norm_sq(i);
        match cutoff {
            Cutoff::Sharp => (r2 < 2.0 * nn * nn) as u8 as f64,
            Cutoff::Smooth => transition(r2.sqrt() / nn),
        }
    }))
}
