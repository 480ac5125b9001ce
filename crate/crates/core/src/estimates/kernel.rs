//! Dispersive kernel `I(x,t) = ∫ ψ(|ξ|) e^{i(tξ₁|ξ|^a + x·ξ)} dξ`.
//!
//! The phase is `r ω·Y(r)` with `ξ = rω` and `Y(r) = (t r^a + x₁, x₂, …, xₙ)`,
//! so the angular integral is the Fourier transform of the sphere measure,
//! `σ̂(s) = ∫_{S^{n−1}} e^{isω₁} dω`, at `s = r|Y(r)|`:
//!
//! ```text
//! I(x,t) = ∫ r^{n−1} ψ(r) σ̂(r |Y(r)|) dr
//! ```
//!
//! `σ̂(s) = 4π sin(s)/s` for `n = 3`; higher dimensions integrate
//! `|S^{n−2}| ∫₀^π cos(s cos θ) sin^{n−2}θ dθ`. Both integrals use composite
//! Gauss-Legendre rules whose panel count follows the phase-gradient bound.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{annular_bump, DispersionParams, Family};

const NODES: usize = 16;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(NODES).expect("nonzero"))
            .as_node_weight_pairs()
            .to_vec()
    })
}

/// `∫_lo^hi f` on `panels` equal panels.
fn composite(lo: f64, hi: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (hi - lo) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for &(x, w) in rule() {
            sum += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

/// Radial profile supported in `[1/2, 2]`.
#[derive(Clone, Copy, Debug)]
pub struct RadialProfile {
    pub name: &'static str,
    f: fn(f64) -> f64,
}

impl RadialProfile {
    /// The Littlewood-Paley annular bump `ψ(r) − ψ(2r)`.
    pub fn annular() -> Self {
        RadialProfile {
            name: "annular-bump",
            f: annular_bump,
        }
    }

    pub fn new(name: &'static str, f: fn(f64) -> f64) -> Self {
        RadialProfile { name, f }
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

fn sphere_area(m: usize) -> f64 {
    // |S^m|
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (m as f64 - 1.0) * sphere_area(m - 2),
    }
}

/// `σ̂(s)` for the unit sphere in `ℝⁿ`, `n ≥ 3`.
fn sphere_transform(n: usize, s: f64, refine: usize) -> f64 {
    if n == 3 {
        return if s.abs() < 1e-6 {
            4.0 * PI * (1.0 - s * s / 6.0)
        } else {
            4.0 * PI * s.sin() / s
        };
    }
    let panels = refine * ((8.0 * (1.0 + s.abs() / (2.0 * PI))).ceil() as usize);
    sphere_area(n - 2) * composite(0.0, PI, panels, |th| (s * th.cos()).cos() * th.sin().powi(n as i32 - 2))
}

/// Radial panels on `[1/2, 2]`: `8·(1 + (|t|(1+a)2^a + |x|)/(2π))`.
pub fn kernel_panels(x: &[f64], t: f64, a: f64) -> usize {
    let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let grad = t.abs() * (1.0 + a) * 2f64.powf(a) + xn;
    (8.0 * (1.0 + grad / (2.0 * PI))).ceil() as usize
}

fn check(params: &DispersionParams, x: &[f64]) -> Result<()> {
    if params.n < 3 {
        return Err(Error::KernelDimension(params.n));
    }
    if params.family != Family::Isotropic {
        return Err(Error::InvalidParams(
            "the kernel integral is defined for the isotropic symbol".into(),
        ));
    }
    if x.len() != params.n {
        return Err(Error::InvalidParams(format!(
            "x has {} components, expected {}",
            x.len(),
            params.n
        )));
    }
    Ok(())
}

/// `I(x,t)`; `refine` multiplies the panel counts.
pub fn kernel_integral_refined(
    x: &[f64],
    t: f64,
    params: &DispersionParams,
    profile: &RadialProfile,
    refine: usize,
) -> Result<Complex64> {
    check(params, x)?;
    let n = params.n;
    let a = params.a;
    let rest2: f64 = x[1..].iter().map(|v| v * v).sum();
    let panels = refine * kernel_panels(x, t, a);
    let value = composite(0.5, 2.0, panels, |r| {
        let psi = profile.eval(r);
        if psi == 0.0 {
            return 0.0;
        }
        let y1 = t * r.powf(a) + x[0];
        let s = r * (y1 * y1 + rest2).sqrt();
        r.powi(n as i32 - 1) * psi * sphere_transform(n, s, refine)
    });
    // the phase is odd in ξ, so I is real
    Ok(Complex64::new(value, 0.0))
}

pub fn kernel_integral(x: &[f64], t: f64, params: &DispersionParams, profile: &RadialProfile) -> Result<Complex64> {
    kernel_integral_refined(x, t, params, profile, 1)
}

/// Spatial sample points for the decay scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XSampler {
    /// Values of `x₁/t` per sign, geometric on `[1/4, (1+a)2^a]`.
    pub ratios: usize,
    /// Transverse offsets `|x'| = β|x₁|` for each `β` in `{0, 1/4, 1/2, 1}`.
    pub transverse: bool,
    /// Random points with `|x| ∈ [2, 8]·(1+a)2^a|t|`.
    pub far: usize,
    pub seed: u64,
}

impl Default for XSampler {
    fn default() -> Self {
        XSampler {
            ratios: 16,
            transverse: true,
            far: 16,
            seed: 0,
        }
    }
}

impl XSampler {
    /// Half-width of the local refinement bracket: two sample spacings in `x₁`.
    fn local_step(&self, t: f64, a: f64) -> f64 {
        let top = (1.0 + a) * 2f64.powf(a);
        let ratio = (top / 0.25).powf(1.0 / (self.ratios.max(2) - 1) as f64);
        2.0 * (ratio - 1.0) * top * t.abs().max(1.0)
    }

    pub fn points(&self, n: usize, t: f64, a: f64) -> Vec<Vec<f64>> {
        let top = (1.0 + a) * 2f64.powf(a);
        let mut out = vec![vec![0.0; n]];
        let betas: &[f64] = if self.transverse {
            &[0.0, 0.25, 0.5, 1.0]
        } else {
            &[0.0]
        };
        for i in 0..self.ratios {
            let frac = if self.ratios == 1 {
                0.0
            } else {
                i as f64 / (self.ratios - 1) as f64
            };
            let rho = 0.25 * (top / 0.25).powf(frac);
            for sign in [-1.0, 1.0] {
                for &b in betas {
                    let mut x = vec![0.0; n];
                    x[0] = sign * rho * t;
                    x[1] = b * rho * t.abs();
                    out.push(x);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ t.to_bits());
        for _ in 0..self.far {
            let radius = rng.random_range(2.0..8.0) * top * t.abs().max(1.0);
            let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            out.push(dir.iter().map(|v| v / norm * radius).collect());
        }
        out
    }
}

/// Golden-section ascent along each coordinate in turn, starting from a
/// sampled maximum; brackets are `x_d ± step`.
fn refine_max(start: &[f64], value: f64, step: f64, f: impl Fn(&[f64]) -> Result<f64>) -> Result<(Vec<f64>, f64)> {
    const G: f64 = 0.618_033_988_749_894_8;
    let mut x = start.to_vec();
    let mut best = value;
    for _round in 0..2 {
        for d in 0..x.len().min(2) {
            let (mut lo, mut hi) = (x[d] - step, x[d] + step);
            let at = |v: f64, x: &[f64]| -> Result<f64> {
                let mut y = x.to_vec();
                y[d] = v;
                f(&y)
            };
            let mut c = hi - G * (hi - lo);
            let mut e = lo + G * (hi - lo);
            let (mut fc, mut fe) = (at(c, &x)?, at(e, &x)?);
            for _ in 0..40 {
                if fc > fe {
                    hi = e;
                    e = c;
                    fe = fc;
                    c = hi - G * (hi - lo);
                    fc = at(c, &x)?;
                } else {
                    lo = c;
                    c = e;
                    fc = fe;
                    e = lo + G * (hi - lo);
                    fe = at(e, &x)?;
                }
            }
            let (v, fv) = if fc > fe { (c, fc) } else { (e, fe) };
            if fv > best {
                best = fv;
                x[d] = v;
            }
        }
    }
    Ok((x, best))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelScanRow {
    pub t: f64,
    /// `|t| · sup_x |I(x,t)|` over the sampled points.
    pub scaled_sup: f64,
    pub argmax: Vec<f64>,
    pub points: usize,
    /// Relative change at the argmax when the panels are doubled.
    pub refinement_change: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelDecayReport {
    pub a: f64,
    pub n: usize,
    pub profile: String,
    pub rows: Vec<KernelScanRow>,
    /// Largest `|t|·sup|I|`; the empirical decay constant.
    pub c_emp: f64,
    /// Largest row value over the first row's value.
    pub growth: f64,
    pub max_refinement_change: f64,
    pub pass: bool,
}

/// `|t|·sup_x |I(x,t)|` for each `t`; passes when no row exceeds four times
/// the row at the smallest `|t|`.
pub fn kernel_decay_scan(
    params: &DispersionParams,
    t_list: &[f64],
    sampler: &XSampler,
    profile: &RadialProfile,
) -> Result<KernelDecayReport> {
    check(params, &vec![0.0; params.n])?;
    if t_list.is_empty() {
        return Err(Error::InvalidParams("empty time list".into()));
    }
    let mut ts = t_list.to_vec();
    ts.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).expect("finite times"));
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        let pts = sampler.points(params.n, t, params.a);
        let vals: Vec<f64> = pts
            .par_iter()
            .map(|x| kernel_integral(x, t, params, profile).map(|v| v.norm()))
            .collect::<Result<_>>()?;
        let (best, sup) = vals.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) },
        );
        let step = sampler.local_step(t, params.a);
        let (argmax, sup) = refine_max(&pts[best], sup, step, |x| {
            kernel_integral(x, t, params, profile).map(|v| v.norm())
        })?;
        let fine = kernel_integral_refined(&argmax, t, params, profile, 2)?.norm();
        rows.push(KernelScanRow {
            t,
            scaled_sup: t.abs() * sup,
            argmax,
            points: pts.len(),
            refinement_change: ((fine - sup) / fine).abs(),
        });
    }
    let first = rows[0].scaled_sup;
    let c_emp = rows.iter().map(|r| r.scaled_sup).fold(0.0, f64::max);
    let growth = if first > 0.0 { c_emp / first } else { f64::INFINITY };
    Ok(KernelDecayReport {
        a: params.a,
        n: params.n,
        profile: profile.name.into(),
        max_refinement_change: rows.iter().map(|r| r.refinement_change).fold(0.0, f64::max),
        pass: growth <= 4.0,
        rows,
        c_emp,
        growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, n: usize) -> DispersionParams {
        DispersionParams::isotropic(a, n).unwrap()
    }

    #[test]
    fn rejects_low_dimension() {
        let err = kernel_integral(&[0.0, 0.0], 1.0, &p(2.0, 2), &RadialProfile::annular()).unwrap_err();
        assert!(matches!(err, Error::KernelDimension(2)));
        assert!(err.to_string().contains("n >= 3"));
    }

    #[test]
    fn zero_time_zero_x_is_profile_mass() {
        let prof = RadialProfile::annular();
        let v = kernel_integral(&[0.0; 3], 0.0, &p(1.0, 3), &prof).unwrap();
        // 4π ∫ r² ψ(r) dr by a fine midpoint rule
        let m = 400_000;
        let h = 1.5 / m as f64;
        let mass: f64 = (0..m)
            .map(|i| {
                let r = 0.5 + (i as f64 + 0.5) * h;
                r * r * prof.eval(r)
            })
            .sum::<f64>()
            * h
            * 4.0
            * PI;
        assert!(v.re > 0.0);
        assert!((v.re - mass).abs() < 1e-9 * mass, "{} vs {mass}", v.re);
    }

    #[test]
    fn sphere_transform_quadrature_agrees_in_three_dimensions() {
        // the θ-quadrature path evaluated with n = 3 weights
        for s in [0.0, 0.3, 5.0, 40.0] {
            let quad = sphere_area(1) * composite(0.0, PI, 64, |th| (s * th.cos()).cos() * th.sin());
            assert!((quad - sphere_transform(3, s, 1)).abs() < 1e-10, "s = {s}");
        }
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn symmetry_under_reflection() {
        let prof = RadialProfile::annular();
        for n in [3, 4] {
            let x = vec![0.7, -1.3, 0.4, 2.0][..n].to_vec();
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let a = kernel_integral(&x, 1.7, &p(1.5, n), &prof).unwrap();
            let b = kernel_integral(&neg, -1.7, &p(1.5, n), &prof).unwrap();
            assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1e-300));
        }
    }

    /// Direct Cartesian tensor quadrature over `[−2, 2]³`.
    fn cartesian(x: &[f64; 3], t: f64, a: f64, panels: usize) -> Complex64 {
        let prof = RadialProfile::annular();
        let h = 4.0 / panels as f64;
        let mut nodes = Vec::new();
        for pnl in 0..panels {
            let mid = -2.0 + (pnl as f64 + 0.5) * h;
            for &(z, w) in rule() {
                nodes.push((mid + 0.5 * h * z, 0.5 * h * w));
            }
        }
        nodes
            .par_iter()
            .map(|&(u, wu)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(v, wv) in &nodes {
                    for &(w, ww) in &nodes {
                        let r = (u * u + v * v + w * w).sqrt();
                        let psi = prof.eval(r);
                        if psi != 0.0 {
                            let phase = t * u * r.powf(a) + x[0] * u + x[1] * v + x[2] * w;
                            acc += Complex64::from_polar(wu * wv * ww * psi, phase);
                        }
                    }
                }
                acc
            })
            .sum()
    }

    #[test]
    fn radial_reduction_matches_cartesian_quadrature() {
        let prof = RadialProfile::annular();
        for (x, t, a) in [([0.3, -0.2, 0.5], 0.5, 2.0), ([1.0, 0.4, 0.0], -0.8, 1.0)] {
            let radial = kernel_integral(&x, t, &p(a, 3), &prof).unwrap();
            let direct = cartesian(&x, t, a, 12);
            assert!((radial - direct).norm() < 1e-6 * radial.norm(), "{radial} vs {direct}");
        }
    }

    #[test]
    fn panel_doubling_is_stable() {
        let prof = RadialProfile::annular();
        for (x, t, a) in [([3.0, 1.0, 0.0], 5.0, 2.0), ([-10.0, 0.0, 2.0], 8.0, 1.0)] {
            let c = kernel_integral(&x, t, &p(a, 3), &prof).unwrap();
            let f = kernel_integral_refined(&x, t, &p(a, 3), &prof, 2).unwrap();
            assert!((c - f).norm() < 1e-6 * f.norm());
        }
    }

    #[test]
    fn single_time_scan_passes() {
        let r = kernel_decay_scan(&p(2.0, 3), &[1.0], &XSampler::default(), &RadialProfile::annular()).unwrap();
        assert!(r.pass);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.growth, 1.0);
    }
}
