//! Continuous dependence through frequency truncation of the datum.
//!
//! `cargo run --release --example bona_smith`

use std::f64::consts::PI;
use std::time::Instant;

use fzk::evolution::{bona_smith, normalize_sobolev, random_datum, SolverConfig};
use fzk::spectral::{DispersionParams, SpectralGrid};

fn main() -> fzk::Result<()> {
    let s = 2.0;
    for (a, horizon) in [(1.0, 1.0), (2.0, 0.01)] {
        let p = DispersionParams::isotropic(a, 2)?;
        let g = SpectralGrid::new(2, 128, 2.0 * PI)?;
        let cfg = SolverConfig::at_phase_bound(p, g.clone(), horizon)?.with_diag_every(25);
        let u0 = normalize_sobolev(&random_datum(&g, s + 2.0, Some(cfg.retained_wavenumber()), 3), s);
        let t = Instant::now();
        let table = bona_smith(&u0, s, &[4, 8, 16, 32], &cfg)?;
        println!("a={a} T={horizon} ({:.1?})", t.elapsed());
        for r in &table.rows {
            println!(
                "  N={:>2}  sup L2={:.3e}  sup H^{s}={:.3e}",
                r.cutoff, r.sup_l2, r.sup_hs
            );
        }
        println!(
            "  decay per doubling: L2 {:.2?}  H^{s} {:.2?}",
            table.decay_factors(false),
            table.decay_factors(true)
        );
    }
    Ok(())
}
