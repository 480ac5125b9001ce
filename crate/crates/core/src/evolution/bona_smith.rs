use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::solver::{Solver, SolverConfig, Workspace};
use crate::error::{csv_err, Error, Result};
use crate::spectral::{low_pass, max_dyadic, sobolev_norm, Cutoff, Field};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BonaSmithRow {
    #[serde(rename = "N")]
    pub cutoff: u32,
    /// `sup_t ‖u(t) − u_N(t)‖_{L²}`.
    pub sup_l2: f64,
    /// `sup_t ‖u(t) − u_N(t)‖_{H^s}`.
    pub sup_hs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BonaSmithTable {
    pub s: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub rows: Vec<BonaSmithRow>,
}

impl BonaSmithTable {
    fn column(&self, hs: bool) -> Vec<f64> {
        self.rows.iter().map(|r| if hs { r.sup_hs } else { r.sup_l2 }).collect()
    }

    /// Whether a column is nonincreasing in `N`, up to `tol` relative to its
    /// largest entry.
    pub fn nonincreasing(&self, hs: bool, tol: f64) -> bool {
        let c = self.column(hs);
        let top = c.iter().cloned().fold(0.0, f64::max);
        c.windows(2).all(|w| w[1] <= w[0] + tol * top)
    }

    /// `entry(N) / entry(2N)` for consecutive cutoffs.
    pub fn decay_factors(&self, hs: bool) -> Vec<f64> {
        self.column(hs).windows(2).map(|w| w[0] / w[1]).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["N", "s", "T", "sup_l2", "sup_hs"]).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.cutoff.to_string(),
                self.s.to_string(),
                self.horizon.to_string(),
                r.sup_l2.to_string(),
                r.sup_hs.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evolves `u0` and every truncation `P_{≤N}u0` (sharp cutoff) side by side
/// and records `sup_t ‖u − u_N‖` in `L²` and `H^s` at the diagnostic samples.
pub fn bona_smith(u0: &Field, s: f64, cutoffs: &[u32], cfg: &SolverConfig) -> Result<BonaSmithTable> {
    if !(s > 0.0) {
        return Err(Error::InvalidParams(format!("s = {s} must be positive")));
    }
    let max = max_dyadic(&cfg.grid);
    for &n in cutoffs {
        if n > max || !n.is_power_of_two() {
            return Err(Error::ShellBeyondGrid { shell: n, max });
        }
    }
    let solver = Solver::new(cfg)?;
    let grid = &cfg.grid;
    if u0.grid() != grid {
        return Err(Error::GridMismatch);
    }
    if !u0.is_real() {
        return Err(Error::NotReal("evolution"));
    }
    let mut states: Vec<Vec<Complex64>> = std::iter::once(Ok(u0.coeffs().to_vec()))
        .chain(
            cutoffs
                .iter()
                .map(|&n| low_pass(u0, n, Cutoff::Sharp).map(Field::into_coeffs)),
        )
        .collect::<Result<_>>()?;
    let mut spaces: Vec<Workspace> = states.iter().map(|s| Workspace::new(s.len())).collect();
    let mut sup = vec![(0.0f64, 0.0f64); cutoffs.len()];
    let mut record = |states: &[Vec<Complex64>]| {
        for (k, m) in sup.iter_mut().enumerate() {
            let diff: Vec<Complex64> = states[0].iter().zip(&states[k + 1]).map(|(a, b)| a - b).collect();
            let d = Field::from_coefficients(grid, diff).expect("grid-sized");
            m.0 = m.0.max(d.l2_norm());
            m.1 = m.1.max(sobolev_norm(&d, s));
        }
    };
    record(&states);
    let steps = solver.step_count();
    for step in 1..=steps {
        states
            .par_iter_mut()
            .zip(spaces.par_iter_mut())
            .for_each(|(u, ws)| solver.advance(u, ws));
        if states
            .iter()
            .any(|u| !u.iter().all(|c| c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::BlowUp {
                step,
                time: step as f64 * solver.step_size(),
            });
        }
        if step % cfg.diag_every == 0 || step == steps {
            record(&states);
        }
    }
    Ok(BonaSmithTable {
        s,
        horizon: cfg.horizon,
        rows: cutoffs
            .iter()
            .zip(sup)
            .map(|(&cutoff, (l2, hs))| BonaSmithRow {
                cutoff,
                sup_l2: l2,
                sup_hs: hs,
            })
            .collect(),
    })
}
