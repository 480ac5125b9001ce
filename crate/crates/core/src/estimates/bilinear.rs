//! Bilinear and shorttime product estimates for a high/low pair of free waves.
//!
//! The product of two free waves is formed spectrally: with unitary
//! coefficients, `(fg)^(ζ) = L^{−n/2} Σ_{ξ+η=ζ} f̂(ξ) ĝ(η)`, so
//! `‖fg‖²_{L²} = L^{−n} Σ_ζ |Σ f̂ ĝ|²`. This is the exact continuum product
//! (no aliasing), evaluated on uniform time samples and integrated with the
//! trapezoid rule.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::probe::{EstimateProbe, RatioReport, ShellModes, TrialRatio};
use crate::error::{Error, Result};
use crate::spectral::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductNorm {
    /// `‖fg‖_{L²([0,T]×box)}`.
    L2,
    /// `‖∂ₓ₁(fg)‖_{L¹([0,T]; L²)}`.
    DerivativeL1L2,
}

/// Precomputed convolution structure for two shells.
struct ProductPlan {
    high: ShellModes,
    low: ShellModes,
    high_symbol: Vec<f64>,
    low_symbol: Vec<f64>,
    /// `(ζ, i, j)` sorted by `ζ`.
    pairs: Vec<(u32, u32, u32)>,
    zeta_x1: Vec<f64>,
    volume: f64,
}

impl ProductPlan {
    fn new(probe: &EstimateProbe, high: u32, low: u32) -> Result<Self> {
        let grid = &probe.grid;
        let high_modes = probe.shell_modes(high)?;
        let low_modes = probe.shell_modes(low)?;
        let sym =
            |m: &ShellModes| -> Vec<f64> { m.flat.iter().map(|&i| probe.params.symbol(grid.frequency(i))).collect() };
        let unit = grid.frequency_unit();
        let mut index: HashMap<Vec<i32>, u32> = HashMap::new();
        let mut zeta_x1 = Vec::new();
        let mut pairs = Vec::with_capacity(high_modes.flat.len() * low_modes.flat.len());
        for (i, &fi) in high_modes.flat.iter().enumerate() {
            let ki = grid.wavenumber(fi);
            for (j, &fj) in low_modes.flat.iter().enumerate() {
                let kj = grid.wavenumber(fj);
                let z: Vec<i32> = ki.iter().zip(kj).map(|(a, b)| a + b).collect();
                let next = index.len() as u32;
                let zi = *index.entry(z.clone()).or_insert_with(|| {
                    zeta_x1.push(z[0] as f64 * unit);
                    next
                });
                pairs.push((zi, i as u32, j as u32));
            }
        }
        pairs.sort_unstable();
        Ok(ProductPlan {
            high_symbol: sym(&high_modes),
            low_symbol: sym(&low_modes),
            high: high_modes,
            low: low_modes,
            pairs,
            zeta_x1,
            volume: grid.volume(),
        })
    }

    fn max_phase(&self) -> f64 {
        self.high.max_phase.max(self.low.max_phase)
    }

    fn max_speed(&self) -> f64 {
        self.high.max_speed.max(self.low.max_speed)
    }

    fn coefficients(modes: &ShellModes, f: &Field) -> Vec<Complex64> {
        modes.flat.iter().map(|&i| f.coeffs()[i]).collect()
    }

    /// Time-integrated product norm of the two free evolutions.
    fn integrate(&self, u: &[Complex64], v: &[Complex64], horizon: f64, intervals: usize, norm: ProductNorm) -> f64 {
        let dt = horizon / intervals as f64;
        let step =
            |sym: &[f64]| -> Vec<Complex64> { sym.iter().map(|&s| Complex64::from_polar(1.0, -dt * s)).collect() };
        let (su, sv) = (step(&self.high_symbol), step(&self.low_symbol));
        let mut a = u.to_vec();
        let mut b = v.to_vec();
        let mut buf = vec![Complex64::new(0.0, 0.0); self.zeta_x1.len()];
        let mut total = 0.0;
        for k in 0..=intervals {
            if k > 0 {
                if k % 64 == 0 {
                    // refresh from closed form to keep the recurrence honest
                    let t = k as f64 * dt;
                    for (x, (c, s)) in a.iter_mut().zip(u.iter().zip(&self.high_symbol)) {
                        *x = c * Complex64::from_polar(1.0, -t * s);
                    }
                    for (x, (c, s)) in b.iter_mut().zip(v.iter().zip(&self.low_symbol)) {
                        *x = c * Complex64::from_polar(1.0, -t * s);
                    }
                } else {
                    a.iter_mut().zip(&su).for_each(|(x, s)| *x *= s);
                    b.iter_mut().zip(&sv).for_each(|(x, s)| *x *= s);
                }
            }
            buf.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            for &(z, i, j) in &self.pairs {
                buf[z as usize] += a[i as usize] * b[j as usize];
            }
            let s: f64 = match norm {
                ProductNorm::L2 => buf.iter().map(|c| c.norm_sqr()).sum::<f64>(),
                ProductNorm::DerivativeL1L2 => buf.iter().zip(&self.zeta_x1).map(|(c, z)| z * z * c.norm_sqr()).sum(),
            } / self.volume;
            let value = match norm {
                ProductNorm::L2 => s,
                ProductNorm::DerivativeL1L2 => s.sqrt(),
            };
            let w = if k == 0 || k == intervals { 0.5 } else { 1.0 };
            total += w * value;
        }
        total *= dt;
        match norm {
            ProductNorm::L2 => total.sqrt(),
            ProductNorm::DerivativeL1L2 => total,
        }
    }
}

/// Horizon and interval count for a product experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub horizon: f64,
    pub intervals: usize,
    /// `L / (2·max group speed)`.
    pub wrap_horizon: f64,
}

struct Experiment {
    plan: ProductPlan,
    time: TimeGrid,
    high: u32,
    low: u32,
    norm: ProductNorm,
}

impl Experiment {
    fn new(probe: &EstimateProbe, norm: ProductNorm) -> Result<Self> {
        let (high, low) = match probe.shells.low() {
            Some(low) => (probe.shells.high(), low),
            None => {
                return Err(Error::InvalidParams(
                    "product estimates need a (high, low) shell pair".into(),
                ))
            }
        };
        if 8 * low as u64 > high as u64 {
            return Err(Error::ShellsNotSeparated { high, low });
        }
        let plan = ProductPlan::new(probe, high, low)?;
        let a = probe.params.a;
        let nn = high as f64;
        let wrap_horizon = probe.grid.period() / (2.0 * plan.max_speed());
        let horizon = match (probe.time_horizon, norm) {
            (Some(t), _) => t,
            (None, ProductNorm::L2) => wrap_horizon,
            (None, ProductNorm::DerivativeL1L2) => nn.powf(a - 2.0),
        };
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::TimeHorizon(format!("T = {horizon} is not positive")));
        }
        let transit = 0.25 * nn.powf(-a);
        if horizon < transit {
            return Err(Error::TimeHorizon(format!(
                "T = {horizon:.3e} is shorter than the transit guard N^(-a)/4 = {transit:.3e}"
            )));
        }
        if !probe.allow_wrap && horizon > wrap_horizon * (1.0 + 1e-12) {
            return Err(Error::TimeHorizon(format!(
                "T = {horizon:.3e} exceeds the wrap-around horizon L/(2 max|∇φ|) = {wrap_horizon:.3e} \
                 (N = {high}, a = {a}, L = {})",
                probe.grid.period()
            )));
        }
        let intervals = probe.intervals(horizon, plan.max_phase())?;
        Ok(Experiment {
            plan,
            time: TimeGrid {
                horizon,
                intervals,
                wrap_horizon,
            },
            high,
            low,
            norm,
        })
    }

    fn rhs(&self, probe: &EstimateProbe, u_norm: f64, v_norm: f64) -> f64 {
        let a = probe.params.a;
        let n = probe.params.n as f64;
        let (nn, kk) = (self.high as f64, self.low as f64);
        let base = (kk.powf(n - 1.0) / nn.powf(a)).sqrt() * u_norm * v_norm;
        match self.norm {
            ProductNorm::L2 => base,
            ProductNorm::DerivativeL1L2 => nn.powf(1.0 + (a - 2.0) / 2.0) * base,
        }
    }

    fn measure(&self, probe: &EstimateProbe, u0: &Field, v0: &Field, intervals: usize) -> (f64, f64) {
        let u = ProductPlan::coefficients(&self.plan.high, u0);
        let v = ProductPlan::coefficients(&self.plan.low, v0);
        let norm = |c: &[Complex64]| c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let rhs = self.rhs(probe, norm(&u), norm(&v));
        if rhs == 0.0 {
            return (0.0, 0.0);
        }
        let lhs = self.plan.integrate(&u, &v, self.time.horizon, intervals, self.norm);
        (lhs, rhs)
    }

    fn trial(&self, probe: &EstimateProbe, trial: usize, intervals: usize) -> Result<TrialRatio> {
        let mut rng = probe.rng(trial);
        let u0 = self.plan.high.random_field(&probe.grid, &mut rng, true)?;
        let v0 = self.plan.low.random_field(&probe.grid, &mut rng, true)?;
        let (lhs, rhs) = self.measure(probe, &u0, &v0, intervals);
        Ok(TrialRatio::new(trial, probe.trial_seed(trial), lhs, rhs))
    }

    fn run(&self, probe: &EstimateProbe, name: &str) -> Result<RatioReport> {
        let trials: Vec<TrialRatio> = (0..probe.trials)
            .into_par_iter()
            .map(|t| self.trial(probe, t, self.time.intervals))
            .collect::<Result<_>>()?;
        Ok(RatioReport::assemble(
            name,
            probe,
            None,
            self.time.horizon,
            self.time.intervals,
            trials,
        ))
    }
}

/// `‖P_N S(t)u₀ · P_K S(t)v₀‖_{L²_{t,x}} / [(K^{n−1}/N^a)^{1/2}‖P_N u₀‖‖P_K v₀‖]`
/// over random shell data.
pub fn bilinear_ratio(probe: &EstimateProbe) -> Result<RatioReport> {
    Experiment::new(probe, ProductNorm::L2)?.run(probe, "bilinear")
}

/// `‖∂ₓ₁(P_N S u₀ · P_K S v₀)‖_{L¹([0,T];L²)} / [N^{1+(a−2)/2}(K^{n−1}/N^a)^{1/2}‖u₀‖‖v₀‖]`
/// with `T = N^{a−2}` unless the probe fixes a horizon.
pub fn shorttime_amelioration(probe: &EstimateProbe) -> Result<RatioReport> {
    Experiment::new(probe, ProductNorm::DerivativeL1L2)?.run(probe, "shorttime")
}

/// The product ratio for given data (projected onto the probe's shells).
pub fn product_ratio_for(probe: &EstimateProbe, norm: ProductNorm, u0: &Field, v0: &Field) -> Result<TrialRatio> {
    let exp = Experiment::new(probe, norm)?;
    if u0.grid() != &probe.grid || v0.grid() != &probe.grid {
        return Err(Error::GridMismatch);
    }
    let (lhs, rhs) = exp.measure(probe, u0, v0, exp.time.intervals);
    Ok(TrialRatio::new(0, probe.rng_seed, lhs, rhs))
}

/// Time grid an experiment would use.
pub fn product_time_grid(probe: &EstimateProbe, norm: ProductNorm) -> Result<TimeGrid> {
    Ok(Experiment::new(probe, norm)?.time)
}

/// Relative change of trial 0's measured norm when the time step is halved.
pub fn time_refinement_change(probe: &EstimateProbe, norm: ProductNorm) -> Result<f64> {
    let exp = Experiment::new(probe, norm)?;
    let coarse = exp.trial(probe, 0, exp.time.intervals)?;
    let fine = exp.trial(probe, 0, 2 * exp.time.intervals)?;
    Ok(((fine.lhs - coarse.lhs) / fine.lhs).abs())
}
