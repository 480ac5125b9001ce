use serde::Serialize;

use super::solver::{solve, SolverConfig};
use crate::error::Result;
use crate::spectral::Field;

/// Terminal-state errors of runs at `dt, dt/2, dt/4, …` against a finer reference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub dts: Vec<f64>,
    /// `‖u_dt(T) − u_ref(T)‖ / ‖u_ref(T)‖`.
    pub errors: Vec<f64>,
    /// `log₂(error(dt) / error(dt/2))` for consecutive levels.
    pub orders: Vec<f64>,
    pub reference_dt: f64,
}

/// Runs `levels` step sizes starting at `cfg.dt`, halving each time, and a
/// reference with step `cfg.dt / reference_divisor`.
pub fn self_convergence(
    u0: &Field,
    cfg: &SolverConfig,
    levels: usize,
    reference_divisor: f64,
) -> Result<ConvergenceReport> {
    let run = |dt: f64| -> Result<Field> {
        let c = SolverConfig {
            dt,
            diag_every: usize::MAX,
            sobolev: Vec::new(),
            snapshot_every: 0,
            ..cfg.clone()
        };
        c.validate()?;
        Ok(solve(u0, &c)?.final_state)
    };
    let reference_dt = cfg.dt / reference_divisor;
    let reference = run(reference_dt)?;
    let scale = reference.l2_norm();
    let dts: Vec<f64> = (0..levels).map(|k| cfg.dt / (1u64 << k) as f64).collect();
    let errors = dts
        .iter()
        .map(|&dt| Ok(run(dt)?.sub(&reference)?.l2_norm() / scale))
        .collect::<Result<Vec<f64>>>()?;
    let orders = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(ConvergenceReport {
        dts,
        errors,
        orders,
        reference_dt,
    })
}
