//! Mass and energy drift of the nonlinear solver, plus its convergence order.
//!
//! `cargo run --release --example conservation`

use std::f64::consts::PI;
use std::time::Instant;

use fzk::evolution::{normalize_sobolev, random_datum, self_convergence, solve, SolverConfig};
use fzk::spectral::{DispersionParams, Family, SpectralGrid};

fn main() -> fzk::Result<()> {
    let period = 8.0 * PI;
    for a in [1.0, 1.5, 2.0] {
        let p = DispersionParams::with_period(Family::Isotropic, a, 2, period)?;
        let g = SpectralGrid::new(2, 128, period)?;
        let cfg = SolverConfig::at_phase_bound(p, g.clone(), 1.0)?.with_diag_every(50);
        let u0 = normalize_sobolev(&random_datum(&g, 3.0, Some(cfg.retained_wavenumber()), 1), 3.0);
        let t = Instant::now();
        let traj = solve(&u0, &cfg)?;
        println!(
            "a={a}  dt={:.3e}  steps={}  mass drift={:.2e}  energy drift={:.2e}  ({:.1?})",
            cfg.dt,
            cfg.steps().0,
            traj.mass_drift(),
            traj.energy_drift().unwrap_or(f64::NAN),
            t.elapsed()
        );
        // at unit size all step sizes agree to roundoff; amplify to see the order
        let short = SolverConfig {
            horizon: 0.05,
            ..cfg.clone()
        };
        let conv = self_convergence(&u0.scale(1000.0), &short, 3, 16.0)?;
        println!("  errors {:?}  orders {:.3?}", conv.errors, conv.orders);
    }
    Ok(())
}
