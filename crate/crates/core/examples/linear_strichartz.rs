//! Free-wave space-time norms on dyadic shells in three dimensions.
//!
//! `cargo run --release --example linear_strichartz`

use std::f64::consts::PI;

use fzk::estimates::{linear_strichartz_ratio, loglog_slope, strichartz_exponent, EstimateProbe, ProbeShells};
use fzk::spectral::{DispersionParams, SpectralGrid};

fn main() -> fzk::Result<()> {
    let (q, p) = (4.0, 4.0);
    let grid = SpectralGrid::new(3, 32, 2.0 * PI)?;
    for a in [1.0, 1.5, 2.0] {
        let params = DispersionParams::isotropic(a, 3)?;
        println!("a={a}: s = {:.4}", strichartz_exponent(3, a, q, p));
        let (mut ns, mut ratios) = (Vec::new(), Vec::new());
        for n in [2, 4, 8] {
            let probe = EstimateProbe::new(params, grid.clone(), ProbeShells::Single(n))?
                .with_trials(8)
                .with_seed(11)
                .with_time_horizon(0.05);
            let r = linear_strichartz_ratio(&probe, q, p)?;
            println!("  N={n}  max ratio {:.5}  mean {:.5}", r.ratio, r.mean_ratio);
            ns.push(n as f64);
            ratios.push(r.ratio);
        }
        println!("  log-log slope in N: {:.3}", loglog_slope(&ns, &ratios));
    }
    Ok(())
}
