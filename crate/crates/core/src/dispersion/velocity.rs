use crate::error::{Error, Result};
use crate::spectral::{DispersionParams, Family};

/// `∇φ(ξ)`.
///
/// For the isotropic family
/// `∂₁φ = |ξ|^a + a ξ₁² |ξ|^{a−2}` and `∂ⱼφ = a ξ₁ ξⱼ |ξ|^{a−2}` (`j ≥ 2`),
/// which is singular at the origin unless `a = 2`.
pub fn group_velocity(params: &DispersionParams, xi: &[f64]) -> Result<Vec<f64>> {
    let a = params.a;
    match params.family {
        Family::Isotropic => {
            let r2: f64 = xi.iter().map(|x| x * x).sum();
            if r2 == 0.0 {
                return if params.is_cubic() {
                    Ok(vec![0.0; xi.len()])
                } else {
                    Err(Error::SingularGroupVelocity)
                };
            }
            let ra = r2.powf(0.5 * a);
            let ra2 = r2.powf(0.5 * (a - 2.0));
            let x1 = xi[0];
            Ok(xi
                .iter()
                .enumerate()
                .map(|(j, &xj)| {
                    if j == 0 {
                        ra + a * x1 * x1 * ra2
                    } else {
                        a * x1 * xj * ra2
                    }
                })
                .collect())
        }
        Family::MultiDirectional => Ok(xi.iter().map(|x| (1.0 + a) * x.abs().powf(a)).collect()),
        Family::RibaudVento => {
            let (x1, x2) = (xi[0], xi[1]);
            Ok(vec![-(1.0 + a) * x1.abs().powf(a) - x2 * x2, -2.0 * x1 * x2])
        }
    }
}

/// `|∇φ(ξ)|`, extended by continuity (zero) to the origin.
pub fn group_speed(params: &DispersionParams, xi: &[f64]) -> f64 {
    match group_velocity(params, xi) {
        Ok(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        Err(_) => 0.0,
    }
}

/// `∇φ` on integer lattice points for `a = 2` in exact integer arithmetic.
pub fn group_velocity_exact(params: &DispersionParams, k: &[i64]) -> Option<Vec<i128>> {
    if !params.is_cubic() {
        return None;
    }
    let k: Vec<i128> = k.iter().map(|&v| v as i128).collect();
    Some(match params.family {
        Family::Isotropic => {
            let r2: i128 = k.iter().map(|v| v * v).sum();
            k.iter()
                .enumerate()
                .map(|(j, &kj)| if j == 0 { r2 + 2 * k[0] * k[0] } else { 2 * k[0] * kj })
                .collect()
        }
        Family::MultiDirectional => k.iter().map(|v| 3 * v * v).collect(),
        Family::RibaudVento => vec![-3 * k[0] * k[0] - k[1] * k[1], -2 * k[0] * k[1]],
    })
}
