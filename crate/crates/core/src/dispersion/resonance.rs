use crate::error::{Error, Result};
use crate::spectral::{DispersionParams, Family};

/// `Ω(ξ₁, ξ₂) = φ(ξ₁+ξ₂) − φ(ξ₁) − φ(ξ₂)`.
///
/// For the planar cubic isotropic case with integer inputs the value is
/// computed exactly and checked against the expanded form
/// `3(ξ₁+ξ₂)ξ₁ξ₂ + ξ₁η₂(2η₁+η₂) + ξ₂η₁(η₁+2η₂)`.
pub fn resonance(params: &DispersionParams, xi1: &[f64], xi2: &[f64]) -> f64 {
    if let (Some(k1), Some(k2)) = (as_lattice(params, xi1), as_lattice(params, xi2)) {
        if let Some(exact) = resonance_exact(params, &k1, &k2) {
            if params.family == Family::Isotropic && params.n == 2 {
                let expanded = zk_resonance_expanded([k1[0], k1[1]], [k2[0], k2[1]]);
                assert_eq!(exact, expanded, "expanded resonance disagrees at {k1:?}, {k2:?}");
            }
            return exact as f64;
        }
    }
    let sum: Vec<f64> = xi1.iter().zip(xi2).map(|(a, b)| a + b).collect();
    params.symbol(&sum) - (params.symbol(xi1) + params.symbol(xi2))
}

/// Lattice coordinates when every component is an integer multiple of the
/// unit `2π/L = 1` and small enough for exact cubes.
fn as_lattice(params: &DispersionParams, xi: &[f64]) -> Option<Vec<i64>> {
    if params.frequency_unit() != 1.0 {
        return None;
    }
    xi.iter()
        .map(|&x| (x.fract() == 0.0 && x.abs() < 1e12).then_some(x as i64))
        .collect()
}

/// Definitional `Ω` on integer lattice points for `a = 2`, in `i128`.
pub fn resonance_exact(params: &DispersionParams, k1: &[i64], k2: &[i64]) -> Option<i128> {
    let sum: Vec<i64> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
    Some(params.symbol_exact(&sum)? - params.symbol_exact(k1)? - params.symbol_exact(k2)?)
}

/// Expanded cubic form of `Ω` for `φ(ξ,η) = ξ³ + ξη²`.
pub fn zk_resonance_expanded(k1: [i64; 2], k2: [i64; 2]) -> i128 {
    let (x1, y1) = (k1[0] as i128, k1[1] as i128);
    let (x2, y2) = (k2[0] as i128, k2[1] as i128);
    3 * (x1 + x2) * x1 * x2 + x1 * y2 * (2 * y1 + y2) + x2 * y1 * (y1 + 2 * y2)
}

/// `(∂Ω/∂ξ₂, ∂Ω/∂η₂)` for `φ(ξ,η) = ξ³ + ξη²`.
pub fn resonance_partials(params: &DispersionParams, xi1: &[f64], xi2: &[f64]) -> Result<[f64; 2]> {
    if params.family != Family::Isotropic || !params.is_cubic() || params.n != 2 {
        return Err(Error::ResonancePartialsUnsupported);
    }
    let (x1, y1, x2, y2) = (xi1[0], xi1[1], xi2[0], xi2[1]);
    let (sx, sy) = (x1 + x2, y1 + y2);
    Ok([
        3.0 * sx * sx + sy * sy - 3.0 * x2 * x2 - y2 * y2,
        2.0 * sx * sy - 2.0 * x2 * y2,
    ])
}
