//! Minimum group-velocity gaps over frequency triples.
//!
//! `cargo run --release --example transversality_scan`

use std::time::Instant;

use fzk::dispersion::{min_transversality, Constraint};
use fzk::spectral::DispersionParams;

fn main() -> fzk::Result<()> {
    for a in [1.0, 1.5, 2.0] {
        let p = DispersionParams::isotropic(a, 2)?;
        for n in [8, 16, 32] {
            let t = Instant::now();
            let r = min_transversality(n, &p, Constraint::HighHighHigh)?;
            r.revalidate()?;
            println!(
                "high-high-high a={a} N={n:>2}  c_min={:.6}  witness={:?}  triples={}  ({:.2?})",
                r.c_min,
                r.witness.xi,
                r.triples_scanned,
                t.elapsed()
            );
        }
    }

    let p = DispersionParams::isotropic(2.0, 2)?;
    for (n, k) in [(16, 2), (32, 2), (64, 4)] {
        let r = min_transversality(n, &p, Constraint::SeparatedHighLow { low: k })?;
        println!("separated N={n} K={k}  c_min={:.6}", r.c_min);
    }

    let p3 = DispersionParams::isotropic(2.0, 3)?;
    for k in [4, 5] {
        let t = Instant::now();
        let r = min_transversality(1 << k, &p3, Constraint::ZkSmallFirstComponent)?;
        r.revalidate()?;
        println!(
            "small-first-component k={k}  c_min={:.6}  witness={:?}  ({:.2?})",
            r.c_min,
            r.witness.xi,
            t.elapsed()
        );
    }
    Ok(())
}
