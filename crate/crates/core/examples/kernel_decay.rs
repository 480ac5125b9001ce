//! Decay of the oscillatory kernel in three dimensions.
//!
//! `cargo run --release --example kernel_decay`

use std::time::Instant;

use fzk::estimates::{kernel_decay_scan, kernel_integral, RadialProfile, XSampler};
use fzk::spectral::DispersionParams;

fn main() -> fzk::Result<()> {
    let profile = RadialProfile::annular();
    let ts: Vec<f64> = (1..=64).map(f64::from).collect();
    for a in [1.0, 2.0] {
        let params = DispersionParams::isotropic(a, 3)?;
        println!(
            "a = {a}: I(0, 0) = {:.12}",
            kernel_integral(&[0.0; 3], 0.0, &params, &profile)?.re
        );
        let t0 = Instant::now();
        let report = kernel_decay_scan(&params, &ts, &XSampler::default(), &profile)?;
        for row in report.rows.iter().filter(|r| r.t.log2().fract() == 0.0) {
            println!(
                "  t = {:>4}  |t|·sup|I| = {:.6}  at x = {:?}",
                row.t, row.scaled_sup, row.argmax
            );
        }
        println!(
            "  C_emp = {:.6}, growth = {:.3}, refinement change = {:.2e}, pass = {}  ({:.2?})",
            report.c_emp,
            report.growth,
            report.max_refinement_change,
            report.pass,
            t0.elapsed()
        );
    }
    Ok(())
}
