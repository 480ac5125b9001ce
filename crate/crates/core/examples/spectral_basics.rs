//! Transforms, dyadic projectors, free evolution and the field container.
//!
//! `cargo run --release --example spectral_basics`

use std::f64::consts::PI;

use fzk::spectral::io::{read_field, write_field};
use fzk::spectral::{
    dyadic_range, lp_project, propagate, sobolev_norm, DispersionParams, DyadicShell, Family, Field, SpectralGrid,
};

fn main() -> fzk::Result<()> {
    let grid = SpectralGrid::new(2, 64, 2.0 * PI)?;
    let u = Field::from_fn(&grid, |x| {
        (x[0]).sin() * (2.0 * x[1]).cos() + 0.1 * (9.0 * x[0] + 5.0 * x[1]).cos()
    });
    println!("‖u‖ = {:.12} (physical {:.12})", u.l2_norm(), u.l2_norm_physical());

    let back = Field::from_physical(&grid, &u.to_physical_real())?;
    println!("round trip distance {:.2e}", back.relative_distance(&u));

    for n in dyadic_range(&grid) {
        let piece = lp_project(&u, DyadicShell::smooth(n)?)?;
        println!("  ‖P_{n} u‖ = {:.6}", piece.l2_norm());
    }

    for family in [Family::Isotropic, Family::MultiDirectional, Family::RibaudVento] {
        let params = DispersionParams::new(family, 1.5, 2)?;
        let v = propagate(&u, 0.7, &params);
        let w = propagate(&v, -0.7, &params);
        println!(
            "{family:?}: ‖S(t)u‖_H2 = {:.12}, ‖u‖_H2 = {:.12}, S(−t)S(t)u − u = {:.2e}",
            sobolev_norm(&v, 2.0),
            sobolev_norm(&u, 2.0),
            w.relative_distance(&u)
        );
    }

    let dir = std::env::temp_dir().join("fzk_spectral_basics");
    std::fs::create_dir_all(&dir)?;
    let (data, sidecar) = write_field(&dir.join("u.fzk"), &u)?;
    let loaded = read_field(&data)?;
    println!(
        "wrote {} and {}; reloaded distance {:.2e} (single precision)",
        data.display(),
        sidecar.display(),
        loaded.relative_distance(&u)
    );
    Ok(())
}
