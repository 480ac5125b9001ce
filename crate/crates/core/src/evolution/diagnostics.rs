use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{csv_err, Error, Result};
use crate::spectral::{dyadic_range, io, DispersionParams, DyadicShell, Family, Field, SpectralGrid};

/// `M(u) = ∫u²`, evaluated through Parseval.
pub fn mass(f: &Field) -> Result<f64> {
    if !f.is_real() {
        return Err(Error::NotReal("mass"));
    }
    Ok(f.coeffs().iter().map(|c| c.norm_sqr()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Energy {
    /// `Σ|ξ|^a |û(ξ)|² = ‖D^{a/2}u‖²`.
    pub quadratic: f64,
    /// `−(1/3)∫u³`.
    pub cubic: f64,
    pub total: f64,
}

/// `E(u) = ∫|D^{a/2}u|² − (1/3)u³` for the isotropic symbol.
pub fn energy(f: &Field, params: &DispersionParams) -> Result<Energy> {
    if !f.is_real() {
        return Err(Error::NotReal("energy"));
    }
    if params.family != Family::Isotropic {
        return Err(Error::InvalidParams(format!(
            "energy uses the multiplier |ξ|^(a/2) of IsotropicFZK (got {})",
            params.family
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); f.grid().len()];
    let (quadratic, cubic) = energy_parts_with(f, params, &mut buf).expect("isotropic family");
    Ok(Energy {
        quadratic,
        cubic,
        total: quadratic + cubic,
    })
}

pub(crate) fn energy_parts_with(f: &Field, params: &DispersionParams, buf: &mut [Complex64]) -> Option<(f64, f64)> {
    if params.family != Family::Isotropic {
        return None;
    }
    let grid = f.grid();
    let half = 0.5 * params.a;
    let quadratic = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let r2 = grid.frequency_norm_sq(i);
            if r2 == 0.0 {
                0.0
            } else {
                r2.powf(half) * c.norm_sqr()
            }
        })
        .sum::<f64>();
    buf.copy_from_slice(f.coeffs());
    grid.fft_inverse(buf);
    let scale = 1.0 / grid.volume().sqrt();
    let cube = buf.iter().map(|c| (c.re * scale).powi(3)).sum::<f64>() * grid.cell_volume();
    Some((quadratic, -cube / 3.0))
}

/// Sharp dyadic shells covering the grid and the shell index of every mode.
pub(crate) fn shell_partition(grid: &SpectralGrid) -> (Vec<u32>, Vec<usize>) {
    let shells = dyadic_range(grid);
    let sharp: Vec<DyadicShell> = shells.iter().map(|&n| DyadicShell::sharp(n).expect("dyadic")).collect();
    let of = (0..grid.len())
        .map(|i| {
            let r2 = grid.frequency_norm_sq(i);
            sharp.iter().position(|s| s.weight(r2) > 0.5).unwrap_or(sharp.len() - 1)
        })
        .collect();
    (shells, of)
}

/// Diagnostics at one sample instant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub time: f64,
    pub mass: f64,
    /// Absent for families other than IsotropicFZK.
    pub energy: Option<f64>,
    pub energy_quadratic: Option<f64>,
    pub energy_cubic: Option<f64>,
    /// `‖u(t)‖_{H^s}` for each configured `s`.
    pub sobolev: Vec<f64>,
    /// Per sharp shell, `sup_{τ ≤ t} ‖P_N u(τ)‖`.
    pub shell_sup: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub field: Field,
}

/// Sampled solution history.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub diagnostics: Vec<Diagnostics>,
    pub snapshots: Vec<Snapshot>,
    /// Dyadic `N` labelling the columns of `shell_sup`.
    pub shells: Vec<u32>,
    /// Exponents labelling the columns of `sobolev`.
    pub sobolev: Vec<f64>,
    pub final_state: Field,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds the initial sample")
    }

    /// `max_t |M(t) − M(0)| / M(0)`.
    pub fn mass_drift(&self) -> f64 {
        relative_drift(self.diagnostics.iter().map(|d| d.mass))
    }

    /// `max_t |E(t) − E(0)| / |E(0)|`, if the energy is defined.
    pub fn energy_drift(&self) -> Option<f64> {
        let e: Option<Vec<f64>> = self.diagnostics.iter().map(|d| d.energy).collect();
        e.map(|v| relative_drift(v.into_iter()))
    }

    /// `(Σ_N N^{2s} sup_t ‖P_N u(t)‖²)^{1/2}` from the shell ledger at the last sample.
    pub fn shell_norm(&self, s: f64) -> f64 {
        let last = self.diagnostics.last().expect("non-empty");
        self.shells
            .iter()
            .zip(&last.shell_sup)
            .map(|(&n, &m)| (n as f64).powf(2.0 * s) * m * m)
            .sum::<f64>()
            .sqrt()
    }

    /// Columns: `t, mass, energy, energy_quadratic, energy_cubic, H^s…, shell_N…`.
    pub fn write_diagnostics_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = ["t", "mass", "energy", "energy_quadratic", "energy_cubic"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend(self.sobolev.iter().map(|s| format!("H^{s}")));
        header.extend(self.shells.iter().map(|n| format!("shell_sup_{n}")));
        w.write_record(&header).map_err(csv_err)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for d in &self.diagnostics {
            let mut row = vec![
                d.time.to_string(),
                d.mass.to_string(),
                opt(d.energy),
                opt(d.energy_quadratic),
                opt(d.energy_cubic),
            ];
            row.extend(d.sobolev.iter().map(|v| v.to_string()));
            row.extend(d.shell_sup.iter().map(|v| v.to_string()));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes each kept snapshot as `<stem>_<index>.fzk` plus sidecar;
    /// returns every path written.
    pub fn write_snapshots(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        let mut paths = Vec::new();
        for (i, s) in self.snapshots.iter().enumerate() {
            let (bin, side) = io::write_field(&dir.join(format!("{stem}_{i:05}.fzk")), &s.field)?;
            paths.push(bin);
            paths.push(side);
        }
        Ok(paths)
    }
}

fn relative_drift(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let base = v[0];
    let worst = v.iter().map(|x| (x - base).abs()).fold(0.0, f64::max);
    if base == 0.0 {
        worst
    } else {
        worst / base.abs()
    }
}
