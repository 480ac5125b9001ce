use num_complex::Complex64;
use rayon::prelude::*;

use super::probe::{EstimateProbe, RatioReport, TrialRatio};
use crate::error::{Error, Result};
use crate::spectral::Field;

/// Regularity `s = n(1/2 − 1/p) − (a+1)/q` attached to an admissible pair.
pub fn strichartz_exponent(n: usize, a: f64, q: f64, p: f64) -> f64 {
    n as f64 * (0.5 - 1.0 / p) - (a + 1.0) / q
}

fn check_admissible(q: f64, p: f64) -> Result<()> {
    if !(q >= 2.0 && p >= 2.0) {
        return Err(Error::NotAdmissible(format!("need p, q >= 2 (got q = {q}, p = {p})")));
    }
    if p.is_infinite() {
        return Err(Error::NotAdmissible("p = ∞ is excluded".into()));
    }
    if (2.0 / q + 2.0 / p - 1.0).abs() > 1e-12 {
        return Err(Error::NotAdmissible(format!("2/q + 2/p = {} ≠ 1", 2.0 / q + 2.0 / p)));
    }
    Ok(())
}

/// `‖S(t)f‖_{L^q([0,T]; L^p)}` from time samples and physical-space quadrature.
fn space_time_norm(probe: &EstimateProbe, f: &Field, q: f64, p: f64, horizon: f64, intervals: usize) -> f64 {
    let grid = &probe.grid;
    let cell = grid.cell_volume();
    let scale = 1.0 / grid.volume().sqrt();
    let symbols: Vec<f64> = (0..grid.len())
        .map(|i| probe.params.symbol(grid.frequency(i)))
        .collect();
    let support: Vec<usize> = (0..grid.len())
        .filter(|&i| f.coeffs()[i] != Complex64::new(0.0, 0.0))
        .collect();
    let dt = horizon / intervals as f64;
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut acc = 0.0;
    for k in 0..=intervals {
        let t = k as f64 * dt;
        buf.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for &i in &support {
            buf[i] = f.coeffs()[i] * Complex64::from_polar(1.0, -t * symbols[i]);
        }
        grid.fft_inverse(&mut buf);
        let lp = (buf.iter().map(|c| (c.norm() * scale).powf(p)).sum::<f64>() * cell).powf(1.0 / p);
        if q.is_infinite() {
            acc = f64::max(acc, lp);
        } else {
            let w = if k == 0 || k == intervals { 0.5 } else { 1.0 };
            acc += w * lp.powf(q);
        }
    }
    if q.is_infinite() {
        acc
    } else {
        (acc * dt).powf(1.0 / q)
    }
}

struct Linear {
    q: f64,
    p: f64,
    s: f64,
    horizon: f64,
    intervals: usize,
    modes: super::probe::ShellModes,
}

impl Linear {
    fn new(probe: &EstimateProbe, q: f64, p: f64) -> Result<Self> {
        check_admissible(q, p)?;
        if probe.params.n < 3 {
            return Err(Error::InvalidParams(format!(
                "linear Strichartz check is stated for n >= 3 (got n = {})",
                probe.params.n
            )));
        }
        let modes = probe.shell_modes(probe.shells.high())?;
        let horizon = probe.time_horizon.unwrap_or(1.0);
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::TimeHorizon(format!("T = {horizon} is not positive")));
        }
        let intervals = probe.intervals(horizon, modes.max_phase)?;
        Ok(Linear {
            q,
            p,
            s: strichartz_exponent(probe.params.n, probe.params.a, q, p),
            horizon,
            intervals,
            modes,
        })
    }

    fn ratio(&self, probe: &EstimateProbe, f: &Field, trial: usize) -> TrialRatio {
        let nn = probe.shells.high() as f64;
        let projected: Vec<(usize, Complex64)> = self.modes.restrict(f);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); probe.grid.len()];
        for (i, c) in &projected {
            coeffs[*i] = *c;
        }
        let pf = Field::from_coefficients(&probe.grid, coeffs).expect("grid-sized buffer");
        let rhs = nn.powf(self.s) * pf.l2_norm();
        let lhs = if rhs == 0.0 {
            0.0
        } else {
            space_time_norm(probe, &pf, self.q, self.p, self.horizon, self.intervals)
        };
        TrialRatio::new(trial, probe.trial_seed(trial), lhs, rhs)
    }
}

/// `‖S(t)P_N f‖_{L^q_t L^p_x} / (N^s ‖P_N f‖)` over random complex shell data.
pub fn linear_strichartz_ratio(probe: &EstimateProbe, q: f64, p: f64) -> Result<RatioReport> {
    let lin = Linear::new(probe, q, p)?;
    let trials: Vec<TrialRatio> = (0..probe.trials)
        .into_par_iter()
        .map(|t| {
            let f = lin.modes.random_field(&probe.grid, &mut probe.rng(t), false)?;
            Ok(lin.ratio(probe, &f, t))
        })
        .collect::<Result<_>>()?;
    Ok(RatioReport::assemble(
        "linear-strichartz",
        probe,
        Some((q, p)),
        lin.horizon,
        lin.intervals,
        trials,
    ))
}

/// The linear ratio for a given datum.
pub fn linear_strichartz_for(probe: &EstimateProbe, q: f64, p: f64, f: &Field) -> Result<TrialRatio> {
    if f.grid() != &probe.grid {
        return Err(Error::GridMismatch);
    }
    let lin = Linear::new(probe, q, p)?;
    Ok(lin.ratio(probe, f, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::ProbeShells;
    use crate::spectral::{DispersionParams, SpectralGrid};
    use std::f64::consts::PI;

    fn probe(a: f64) -> EstimateProbe {
        let p = DispersionParams::isotropic(a, 3).unwrap();
        let g = SpectralGrid::new(3, 16, 2.0 * PI).unwrap();
        EstimateProbe::new(p, g, ProbeShells::Single(4))
            .unwrap()
            .with_time_horizon(0.05)
            .with_trials(3)
    }

    #[test]
    fn admissibility() {
        let pr = probe(2.0);
        assert!(linear_strichartz_ratio(&pr, 4.0, 4.0).is_ok());
        assert!(matches!(
            linear_strichartz_ratio(&pr, 3.0, 4.0),
            Err(Error::NotAdmissible(_))
        ));
        assert!(linear_strichartz_ratio(&pr, 2.0, f64::INFINITY).is_err());
        assert_eq!(strichartz_exponent(3, 2.0, 4.0, 4.0), 3.0 / 4.0 - 3.0 / 4.0);
    }

    #[test]
    fn energy_endpoint_is_unitary() {
        let r = linear_strichartz_ratio(&probe(1.5), f64::INFINITY, 2.0).unwrap();
        for t in &r.trials {
            assert!((t.ratio - 1.0).abs() < 1e-12, "{}", t.ratio);
        }
    }

    #[test]
    fn single_mode_closed_form() {
        let pr = probe(2.0);
        let c = Complex64::new(0.3, 2.1);
        let f = Field::from_modes(&pr.grid, &[(vec![3, 1, -2], c)]).unwrap();
        let (q, p) = (4.0, 4.0);
        let r = linear_strichartz_for(&pr, q, p, &f).unwrap();
        let l = 2.0 * PI;
        let s = strichartz_exponent(3, 2.0, q, p);
        let expect = c.norm() * 0.05f64.powf(1.0 / q) * l.powf(3.0 / p - 1.5) / 4f64.powf(s) / c.norm();
        assert!((r.ratio - expect).abs() < 1e-12 * expect, "{} vs {expect}", r.ratio);
    }
}
