use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which dispersion relation drives the linear part of the equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `ξ₁ |ξ|^a`, the isotropic fractional Zakharov-Kuznetsov symbol.
    #[serde(alias = "IsotropicFZK", alias = "isotropic-fzk")]
    Isotropic,
    /// `Σᵢ ξᵢ |ξᵢ|^a`, the direction-split Benjamin-Ono generalisation.
    #[serde(alias = "MultiDirectionalBO", alias = "multi-directional-bo")]
    MultiDirectional,
    /// `−ξ₁|ξ₁|^a − ξ₁ξ₂²`, fractional dispersion in `x₁` only (planar).
    #[serde(alias = "RibaudVento2D", alias = "ribaud-vento-2d")]
    RibaudVento,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Isotropic => "IsotropicFZK",
            Family::MultiDirectional => "MultiDirectionalBO",
            Family::RibaudVento => "RibaudVento2D",
        };
        f.write_str(s)
    }
}

/// Symbol family, fractional exponent `a ∈ [1, 2]`, dimension and box period.
///
/// Lattice frequencies live on `(2π/L)·ℤⁿ`; with the default `L = 2π` they
/// are integers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams {
    pub family: Family,
    pub a: f64,
    pub n: usize,
    pub period: f64,
}

impl DispersionParams {
    pub fn new(family: Family, a: f64, n: usize) -> Result<Self> {
        Self::with_period(family, a, n, 2.0 * PI)
    }

    pub fn isotropic(a: f64, n: usize) -> Result<Self> {
        Self::new(Family::Isotropic, a, n)
    }

    pub fn with_period(family: Family, a: f64, n: usize, period: f64) -> Result<Self> {
        let p = DispersionParams { family, a, n, period };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1.0..=2.0).contains(&self.a) {
            return Err(Error::InvalidParams(format!("exponent a = {} outside [1, 2]", self.a)));
        }
        if self.n == 0 {
            return Err(Error::InvalidParams("dimension must be >= 1".into()));
        }
        if self.family == Family::RibaudVento && self.n != 2 {
            return Err(Error::InvalidParams(format!(
                "RibaudVento2D requires n = 2 (got n = {})",
                self.n
            )));
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::InvalidParams(format!(
                "period must be positive (got {})",
                self.period
            )));
        }
        Ok(())
    }

    /// Spacing of the frequency lattice, `2π/L`.
    pub fn frequency_unit(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// True when `a == 2`, the case where lattice symbols are integers.
    pub fn is_cubic(&self) -> bool {
        self.a == 2.0
    }

    /// The dispersion relation φ(ξ); the propagator is `e^{−itφ(ξ)}`.
    pub fn symbol(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.n);
        let a = self.a;
        match self.family {
            Family::Isotropic => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                if r2 == 0.0 {
                    0.0
                } else {
                    xi[0] * r2.powf(0.5 * a)
                }
            }
            Family::MultiDirectional => xi.iter().map(|&x| x * x.abs().powf(a)).sum(),
            Family::RibaudVento => {
                let (x1, x2) = (xi[0], xi[1]);
                -x1 * x1.abs().powf(a) - x1 * x2 * x2
            }
        }
    }

    /// φ on integer lattice points for `a = 2`, evaluated in exact integer arithmetic.
    pub fn symbol_exact(&self, k: &[i64]) -> Option<i128> {
        if !self.is_cubic() {
            return None;
        }
        let k: Vec<i128> = k.iter().map(|&v| v as i128).collect();
        Some(match self.family {
            Family::Isotropic => k[0] * k.iter().map(|v| v * v).sum::<i128>(),
            Family::MultiDirectional => k.iter().map(|v| v * v * v).sum(),
            Family::RibaudVento => -k[0] * k[0] * k[0] - k[0] * k[1] * k[1],
        })
    }
}

/// Free-function form of [`DispersionParams::symbol`].
pub fn symbol_multiplier(params: &DispersionParams, xi: &[f64]) -> f64 {
    params.symbol(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_examples() {
        let p2 = DispersionParams::isotropic(2.0, 2).unwrap();
        assert_eq!(p2.symbol(&[2.0, 1.0]), 10.0);
        // ω(ξ,η) = ξ³ + ξη²
        assert_eq!(p2.symbol(&[2.0, 1.0]), 8.0 + 2.0);
        let p1 = DispersionParams::isotropic(1.0, 2).unwrap();
        assert_eq!(p1.symbol(&[3.0, 4.0]), 15.0);
    }

    #[test]
    fn origin_maps_to_zero() {
        for fam in [Family::Isotropic, Family::MultiDirectional, Family::RibaudVento] {
            for a in [1.0, 1.5, 2.0] {
                let p = DispersionParams::new(fam, a, 2).unwrap();
                assert_eq!(p.symbol(&[0.0, 0.0]), 0.0);
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(DispersionParams::isotropic(0.5, 2).is_err());
        assert!(DispersionParams::isotropic(2.5, 2).is_err());
        assert!(DispersionParams::new(Family::RibaudVento, 1.5, 3).is_err());
        assert!(DispersionParams::with_period(Family::Isotropic, 1.0, 2, 0.0).is_err());
    }

    #[test]
    fn exact_symbol_agrees_with_float() {
        for fam in [Family::Isotropic, Family::MultiDirectional, Family::RibaudVento] {
            let p = DispersionParams::new(fam, 2.0, 2).unwrap();
            for k in [[3i64, -4], [-7, 2], [0, 5], [11, 0]] {
                let exact = p.symbol_exact(&k).unwrap();
                let float = p.symbol(&[k[0] as f64, k[1] as f64]);
                assert_eq!(exact as f64, float, "{fam} {k:?}");
            }
        }
    }
}
