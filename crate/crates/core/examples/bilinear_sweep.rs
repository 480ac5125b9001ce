//! Bilinear and shorttime ratios across the high shell `N`.
//!
//! `cargo run --release --example bilinear_sweep`

use std::f64::consts::PI;
use std::time::Instant;

use fzk::estimates::{bilinear_ratio, shorttime_amelioration, spread, EstimateProbe, ProbeShells, RatioReport};
use fzk::spectral::{DispersionParams, SpectralGrid};

type Experiment = fn(&EstimateProbe) -> fzk::Result<RatioReport>;

fn main() -> fzk::Result<()> {
    let grid = SpectralGrid::new(2, 256, 2.0 * PI)?;
    let experiments: [(&str, Experiment); 2] = [("bilinear", bilinear_ratio), ("shorttime", shorttime_amelioration)];
    for (name, run) in experiments {
        for a in [1.0, 1.5, 2.0] {
            let params = DispersionParams::isotropic(a, 2)?;
            for k in [1, 2] {
                let mut maxima = Vec::new();
                for n in [16, 32, 64] {
                    let probe = EstimateProbe::new(params, grid.clone(), ProbeShells::Pair { high: n, low: k })?
                        .with_trials(50)
                        .with_seed(2024);
                    let t = Instant::now();
                    match run(&probe) {
                        Ok(r) => {
                            println!(
                                "{name} a={a} K={k} N={n:>2}  max={:.5}  mean={:.5}  T={:.3e}  steps={}  ({:.2?})",
                                r.ratio,
                                r.mean_ratio,
                                r.time_horizon,
                                r.time_samples,
                                t.elapsed()
                            );
                            maxima.push(r.ratio);
                        }
                        Err(e) => println!("{name} a={a} K={k} N={n:>2}  rejected: {e}"),
                    }
                }
                if maxima.len() == 3 {
                    println!("  spread over N: {:.4}", spread(&maxima));
                }
            }
        }
    }
    Ok(())
}
