use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::diagnostics::{Diagnostics, Snapshot, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::{DispersionParams, Field, SpectralGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest admissible `dt · max|φ|` over the retained modes.
pub const PHASE_BOUND: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dealias {
    /// Keeps `|kⱼ| ≤ (M−1)/3` in every direction; quadratic products of
    /// retained modes are then alias-free.
    #[serde(alias = "TwoThirds", alias = "2/3")]
    TwoThirds,
    #[serde(alias = "None")]
    None,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integrator {
    /// Integrating-factor classical RK4: the linear flow is applied exactly.
    #[default]
    #[serde(alias = "ifrk4", alias = "IF-RK4")]
    IFRK4,
}

/// Solver settings for `∂ₜu + ∂ₓ₁(−Δ)^{a/2}u = u ∂ₓ₁u`.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub params: DispersionParams,
    pub grid: SpectralGrid,
    /// Largest step; the horizon is split into `⌈T/dt⌉` equal steps.
    pub dt: f64,
    pub horizon: f64,
    pub dealias: Dealias,
    pub integrator: Integrator,
    /// Steps between diagnostic samples (the final state is always sampled).
    pub diag_every: usize,
    /// Exponents `s` of the `H^s` norms recorded at each sample.
    pub sobolev: Vec<f64>,
    /// Keep every k-th sample's field (0 keeps only the initial and final).
    pub snapshot_every: usize,
    /// Set to false to drop the nonlinear term; used to check the linear limit.
    pub nonlinear: bool,
}

impl SolverConfig {
    pub fn new(params: DispersionParams, grid: SpectralGrid, dt: f64, horizon: f64) -> Result<Self> {
        let cfg = SolverConfig {
            dt,
            horizon,
            ..Self::defaults(params, grid)
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config whose step sits exactly at the phase-resolution bound.
    pub fn at_phase_bound(params: DispersionParams, grid: SpectralGrid, horizon: f64) -> Result<Self> {
        let mut cfg = Self::defaults(params, grid);
        cfg.check_shape()?;
        let top = cfg.max_phase();
        cfg.dt = if top > 0.0 { PHASE_BOUND / top } else { 1.0 };
        cfg.horizon = horizon;
        cfg.validate()?;
        Ok(cfg)
    }

    fn defaults(params: DispersionParams, grid: SpectralGrid) -> Self {
        SolverConfig {
            params,
            grid,
            dt: 1.0,
            horizon: 0.0,
            dealias: Dealias::TwoThirds,
            integrator: Integrator::IFRK4,
            diag_every: 10,
            sobolev: vec![1.0, 2.0, 3.0],
            snapshot_every: 0,
            nonlinear: true,
        }
    }

    pub fn with_dealias(mut self, dealias: Dealias) -> Result<Self> {
        self.dealias = dealias;
        self.validate()?;
        Ok(self)
    }

    pub fn with_diag_every(mut self, k: usize) -> Self {
        self.diag_every = k.max(1);
        self
    }

    pub fn with_sobolev(mut self, s: Vec<f64>) -> Self {
        self.sobolev = s;
        self
    }

    pub fn with_snapshot_every(mut self, k: usize) -> Self {
        self.snapshot_every = k;
        self
    }

    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    /// Largest retained `|kⱼ|`.
    pub fn retained_wavenumber(&self) -> i64 {
        let m = self.grid.modes_per_dim() as i64;
        match self.dealias {
            Dealias::TwoThirds => (m - 1) / 3,
            Dealias::None => m / 2,
        }
    }

    pub fn retains(&self, flat: usize) -> bool {
        let k = self.retained_wavenumber();
        self.grid.wavenumber(flat).iter().all(|&v| (v as i64).abs() <= k)
    }

    /// `max|φ(ξ)|` over the retained modes.
    pub fn max_phase(&self) -> f64 {
        (0..self.grid.len())
            .filter(|&i| self.retains(i))
            .map(|i| self.params.symbol(self.grid.frequency(i)).abs())
            .fold(0.0, f64::max)
    }

    /// Number of steps and the step actually taken.
    pub fn steps(&self) -> (usize, f64) {
        if self.horizon == 0.0 {
            return (0, self.dt);
        }
        let n = (self.horizon / self.dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (n, self.horizon / n as f64)
    }

    fn check_shape(&self) -> Result<()> {
        self.params.validate()?;
        if self.grid.dim() != self.params.n || self.grid.period() != self.params.period {
            return Err(Error::InvalidParams(format!(
                "grid (n = {}, L = {}) does not match parameters (n = {}, L = {})",
                self.grid.dim(),
                self.grid.period(),
                self.params.n,
                self.params.period
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return Err(Error::TimeHorizon(format!(
                "T = {} must be finite and >= 0",
                self.horizon
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::TimeResolution(format!("dt = {} must be positive", self.dt)));
        }
        let top = self.max_phase();
        if self.dt * top > PHASE_BOUND * (1.0 + 1e-12) {
            return Err(Error::TimeResolution(format!(
                "dt · max|φ| = {:.4} exceeds {PHASE_BOUND} (dt = {:e}, max|φ| = {top:.4e})",
                self.dt * top,
                self.dt
            )));
        }
        if self.diag_every == 0 {
            return Err(Error::InvalidParams("diag_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Precomputed tables for repeated steps with one configuration.
pub struct Solver {
    cfg: SolverConfig,
    h: f64,
    steps: usize,
    full: Vec<Complex64>,
    half: Vec<Complex64>,
    /// `i ξ₁ / 2` on retained modes, zero elsewhere.
    deriv: Vec<Complex64>,
    mask: Vec<bool>,
    neg: Vec<usize>,
    nyquist: Vec<bool>,
    to_phys: f64,
    to_spec: f64,
}

/// Scratch buffers for one RK4 stage sequence.
pub(crate) struct Workspace {
    buf: Vec<Complex64>,
    k: [Vec<Complex64>; 4],
    stage: Vec<Complex64>,
}

impl Workspace {
    pub(crate) fn new(len: usize) -> Self {
        Workspace {
            buf: vec![ZERO; len],
            k: std::array::from_fn(|_| vec![ZERO; len]),
            stage: vec![ZERO; len],
        }
    }
}

impl Solver {
    pub fn new(cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let grid = &cfg.grid;
        let (steps, h) = cfg.steps();
        let phase = |tau: f64| -> Vec<Complex64> {
            (0..grid.len())
                .map(|i| Complex64::from_polar(1.0, -tau * cfg.params.symbol(grid.frequency(i))))
                .collect()
        };
        let mask: Vec<bool> = (0..grid.len()).map(|i| cfg.retains(i)).collect();
        let deriv = (0..grid.len())
            .map(|i| {
                if mask[i] {
                    Complex64::new(0.0, 0.5 * grid.frequency(i)[0])
                } else {
                    ZERO
                }
            })
            .collect();
        let vol = grid.volume();
        Ok(Solver {
            full: phase(h),
            half: phase(0.5 * h),
            deriv,
            mask,
            neg: (0..grid.len()).map(|i| grid.negated_index(i)).collect(),
            nyquist: (0..grid.len()).map(|i| grid.is_nyquist(i)).collect(),
            to_phys: 1.0 / vol.sqrt(),
            to_spec: vol.sqrt() / grid.len() as f64,
            h,
            steps,
            cfg: cfg.clone(),
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// The step length actually used.
    pub fn step_size(&self) -> f64 {
        self.h
    }

    pub fn step_count(&self) -> usize {
        self.steps
    }

    /// `N(û) = P[(1/2) iξ₁ · F((P u)²)]` with `P` the dealiasing mask.
    pub(crate) fn nonlinear_into(&self, u: &[Complex64], out: &mut [Complex64], buf: &mut [Complex64]) {
        if !self.cfg.nonlinear {
            out.iter_mut().for_each(|c| *c = ZERO);
            return;
        }
        for ((b, &c), &keep) in buf.iter_mut().zip(u).zip(&self.mask) {
            *b = if keep { c } else { ZERO };
        }
        self.cfg.grid.fft_inverse(buf);
        for b in buf.iter_mut() {
            let v = b.re * self.to_phys;
            *b = Complex64::new(v * v, 0.0);
        }
        self.cfg.grid.fft_forward(buf);
        for ((o, &b), &d) in out.iter_mut().zip(buf.iter()).zip(&self.deriv) {
            *o = b * self.to_spec * d;
        }
    }

    /// One IF-RK4 step on raw coefficients, in place.
    pub(crate) fn advance(&self, u: &mut [Complex64], ws: &mut Workspace) {
        let (e, e2, h) = (&self.full, &self.half, self.h);
        let Workspace { buf, k, stage } = ws;
        let [k1, k2, k3, k4] = k;
        self.nonlinear_into(u, k1, buf);
        for i in 0..u.len() {
            stage[i] = e2[i] * (u[i] + 0.5 * h * k1[i]);
        }
        self.nonlinear_into(stage, k2, buf);
        for i in 0..u.len() {
            stage[i] = e2[i] * u[i] + 0.5 * h * k2[i];
        }
        self.nonlinear_into(stage, k3, buf);
        for i in 0..u.len() {
            stage[i] = e[i] * u[i] + h * e2[i] * k3[i];
        }
        self.nonlinear_into(stage, k4, buf);
        for i in 0..u.len() {
            u[i] = e[i] * u[i] + h / 6.0 * (e[i] * k1[i] + 2.0 * e2[i] * (k2[i] + k3[i]) + k4[i]);
        }
        self.symmetrize(u);
    }

    fn symmetrize(&self, u: &mut [Complex64]) {
        for i in 0..u.len() {
            if self.nyquist[i] {
                u[i] = ZERO;
                continue;
            }
            let j = self.neg[i];
            if j > i {
                let avg = 0.5 * (u[i] + u[j].conj());
                u[i] = avg;
                u[j] = avg.conj();
            } else if j == i {
                u[i].im = 0.0;
            }
        }
    }

    fn check_input(&self, f: &Field) -> Result<()> {
        if f.grid() != &self.cfg.grid {
            return Err(Error::GridMismatch);
        }
        if !f.is_real() {
            return Err(Error::NotReal("evolution"));
        }
        Ok(())
    }

    /// Advances `f` by one step of length [`Solver::step_size`].
    pub fn step(&self, f: &Field) -> Result<Field> {
        self.check_input(f)?;
        let mut u = f.coeffs().to_vec();
        let mut ws = Workspace::new(u.len());
        self.advance(&mut u, &mut ws);
        if !u.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::BlowUp { step: 1, time: self.h });
        }
        Ok(Field::from_raw(&self.cfg.grid, u, true))
    }

    /// Iterates to the horizon, recording diagnostics every `diag_every` steps.
    pub fn solve(&self, u0: &Field) -> Result<Trajectory> {
        self.check_input(u0)?;
        let grid = &self.cfg.grid;
        let mut recorder = Recorder::new(&self.cfg);
        let mut u = u0.coeffs().to_vec();
        let mut ws = Workspace::new(u.len());
        recorder.sample(0.0, u0, &mut ws.buf)?;
        for step in 1..=self.steps {
            self.advance(&mut u, &mut ws);
            let t = step as f64 * self.h;
            if !u.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::BlowUp { step, time: t });
            }
            if step % self.cfg.diag_every == 0 || step == self.steps {
                let f = Field::from_raw(grid, u.clone(), true);
                recorder.sample(t, &f, &mut ws.buf)?;
            }
        }
        Ok(recorder.finish(Field::from_raw(grid, u, true)))
    }
}

struct Recorder<'a> {
    cfg: &'a SolverConfig,
    times: Vec<f64>,
    diagnostics: Vec<Diagnostics>,
    snapshots: Vec<Snapshot>,
    shell_of: Vec<usize>,
    shells: Vec<u32>,
    sup: Vec<f64>,
}

impl<'a> Recorder<'a> {
    fn new(cfg: &'a SolverConfig) -> Self {
        let (shells, shell_of) = super::diagnostics::shell_partition(&cfg.grid);
        Recorder {
            cfg,
            times: Vec::new(),
            diagnostics: Vec::new(),
            snapshots: Vec::new(),
            sup: vec![0.0; shells.len()],
            shell_of,
            shells,
        }
    }

    fn sample(&mut self, t: f64, f: &Field, buf: &mut [Complex64]) -> Result<()> {
        let mut current = vec![0.0; self.shells.len()];
        for (c, &s) in f.coeffs().iter().zip(&self.shell_of) {
            current[s] += c.norm_sqr();
        }
        for (m, c) in self.sup.iter_mut().zip(&current) {
            *m = m.max(c.sqrt());
        }
        let energy = super::diagnostics::energy_parts_with(f, &self.cfg.params, buf);
        let index = self.times.len();
        self.diagnostics.push(Diagnostics {
            time: t,
            mass: current.iter().sum(),
            energy: energy.map(|(q, c)| q + c),
            energy_quadratic: energy.map(|e| e.0),
            energy_cubic: energy.map(|e| e.1),
            sobolev: self
                .cfg
                .sobolev
                .iter()
                .map(|&s| crate::spectral::sobolev_norm(f, s))
                .collect(),
            shell_sup: self.sup.clone(),
        });
        self.times.push(t);
        let keep = index == 0 || (self.cfg.snapshot_every > 0 && index % self.cfg.snapshot_every == 0);
        if keep {
            self.snapshots.push(Snapshot {
                time: t,
                field: f.clone(),
            });
        }
        Ok(())
    }

    fn finish(self, last: Field) -> Trajectory {
        let mut snapshots = self.snapshots;
        let t_end = *self.times.last().expect("initial sample recorded");
        if snapshots.last().map(|s| s.time) != Some(t_end) {
            snapshots.push(Snapshot {
                time: t_end,
                field: last.clone(),
            });
        }
        Trajectory {
            times: self.times,
            diagnostics: self.diagnostics,
            snapshots,
            shells: self.shells,
            sobolev: self.cfg.sobolev.clone(),
            final_state: last,
        }
    }
}

/// One step of the configured length (see [`SolverConfig::steps`]).
pub fn step(f: &Field, cfg: &SolverConfig) -> Result<Field> {
    Solver::new(cfg)?.step(f)
}

/// Evolves `u0` to `cfg.horizon`.
pub fn solve(u0: &Field, cfg: &SolverConfig) -> Result<Trajectory> {
    Solver::new(cfg)?.solve(u0)
}

/// The dealiased nonlinear term `(1/2) ∂ₓ₁(u²)` as a field.
pub fn nonlinearity(f: &Field, dealias: Dealias) -> Result<Field> {
    if !f.is_real() {
        return Err(Error::NotReal("nonlinearity"));
    }
    let grid = f.grid();
    let m = grid.modes_per_dim() as i64;
    let keep = match dealias {
        Dealias::TwoThirds => (m - 1) / 3,
        Dealias::None => m / 2,
    };
    let mask: Vec<bool> = (0..grid.len())
        .map(|i| grid.wavenumber(i).iter().all(|&v| (v as i64).abs() <= keep))
        .collect();
    let vol = grid.volume();
    let mut buf: Vec<Complex64> = f
        .coeffs()
        .iter()
        .zip(&mask)
        .map(|(&c, &k)| if k { c } else { ZERO })
        .collect();
    grid.fft_inverse(&mut buf);
    for b in buf.iter_mut() {
        let v = b.re / vol.sqrt();
        *b = Complex64::new(v * v, 0.0);
    }
    grid.fft_forward(&mut buf);
    let scale = vol.sqrt() / grid.len() as f64;
    let out = buf
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            if mask[i] && !grid.is_nyquist(i) {
                b * scale * Complex64::new(0.0, 0.5 * grid.frequency(i)[0])
            } else {
                ZERO
            }
        })
        .collect();
    Ok(Field::from_raw(grid, out, true).hermitian_symmetrize())
}

/// The symmetry `u(t, x₁, x') → u(−t, −x₁, x')`: evolving the reflected state
/// forward runs the original solution backwards.
pub fn time_reverse(f: &Field) -> Field {
    f.reflect_x1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::mass;
    use crate::spectral::propagate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn setup(a: f64, m: usize, horizon: f64) -> SolverConfig {
        let p = DispersionParams::isotropic(a, 2).unwrap();
        let g = SpectralGrid::new(2, m, 2.0 * PI).unwrap();
        SolverConfig::at_phase_bound(p, g, horizon).unwrap()
    }

    fn smooth(g: &SpectralGrid, amp: f64) -> Field {
        Field::from_fn(g, |x| {
            amp * (x[0].cos() + 0.5 * (x[0] + 2.0 * x[1]).sin() - 0.3 * (2.0 * x[0] - x[1]).cos())
        })
    }

    #[test]
    fn zero_stays_zero() {
        let c = setup(1.5, 16, 0.1);
        let z = Field::zeros(&c.grid, true);
        assert_eq!(step(&z, &c).unwrap(), z);
    }

    #[test]
    fn linear_limit_is_exact() {
        let c = setup(1.5, 32, 0.2).linear_only();
        let u = smooth(&c.grid, 1.0);
        let s = Solver::new(&c).unwrap();
        let one = s.step(&u).unwrap();
        let exact = propagate(&u, s.step_size(), &c.params);
        assert!(one.relative_distance(&exact) < 1e-12);
        let traj = s.solve(&u).unwrap();
        assert!(traj.final_state.relative_distance(&propagate(&u, 0.2, &c.params)) < 1e-12);
    }

    #[test]
    fn first_order_perturbation() {
        let c = setup(2.0, 16, 0.1);
        let u = Field::from_fn(&c.grid, |x| x[0].cos());
        let eps = 1e-4;
        let s = Solver::new(&c).unwrap();
        let out = s.step(&u.scale(eps)).unwrap();
        let lin = propagate(&u, s.step_size(), &c.params).scale(eps);
        assert!(out.sub(&lin).unwrap().l2_norm() < 1e-7);
        assert!(out.is_real());
    }

    #[test]
    fn dealiased_product_matches_direct_convolution() {
        let g = SpectralGrid::new(2, 16, 2.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let modes: Vec<(Vec<i64>, Complex64)> = (-5i64..=5)
            .flat_map(|i| (-5i64..=5).map(move |j| vec![i, j]))
            .map(|k| {
                (
                    k,
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                )
            })
            .collect();
        let f = Field::from_modes(&g, &modes).unwrap().hermitian_symmetrize();
        let got = nonlinearity(&f, Dealias::TwoThirds).unwrap();
        let scale = 1.0 / g.volume().sqrt();
        let mut worst: f64 = 0.0;
        for i in 0..g.len() {
            let z: Vec<i64> = g.wavenumber(i).iter().map(|&v| v as i64).collect();
            let mut conv = Complex64::new(0.0, 0.0);
            if z.iter().all(|v| v.abs() <= 5) {
                for j in 0..g.len() {
                    let k: Vec<i64> = g.wavenumber(j).iter().map(|&v| v as i64).collect();
                    if k.iter().any(|v| v.abs() > 5) {
                        continue;
                    }
                    let rest = [z[0] - k[0], z[1] - k[1]];
                    conv += f.coeffs()[j] * f.coeff(&rest);
                }
                conv *= Complex64::new(0.0, 0.5 * z[0] as f64) * scale;
            }
            worst = worst.max((conv - got.coeffs()[i]).norm());
        }
        assert!(worst < 1e-12, "{worst:e}");
    }

    #[test]
    fn zero_horizon_keeps_initial_snapshot() {
        let c = setup(1.0, 16, 0.0);
        let u = smooth(&c.grid, 0.1);
        let t = solve(&u, &c).unwrap();
        assert_eq!(t.times, vec![0.0]);
        assert_eq!(t.snapshots.len(), 1);
        assert_eq!(t.snapshots[0].field, u);
    }

    #[test]
    fn rejects_unresolved_steps_and_complex_data() {
        let c = setup(2.0, 16, 0.1);
        let bad = SolverConfig {
            dt: 3.0 * c.dt,
            ..c.clone()
        };
        assert!(matches!(bad.validate(), Err(Error::TimeResolution(_))));
        let z = Field::from_modes(&c.grid, &[(vec![1, 0], Complex64::new(1.0, 0.0))]).unwrap();
        assert!(matches!(step(&z, &c), Err(Error::NotReal(_))));
        let other = SpectralGrid::new(2, 16, 4.0 * PI).unwrap();
        assert!(SolverConfig::new(c.params, other, 1e-4, 0.1).is_err());
    }

    #[test]
    fn reports_blow_up() {
        let c = setup(1.0, 16, 0.01);
        let u = smooth(&c.grid, 1e200);
        assert!(matches!(solve(&u, &c), Err(Error::BlowUp { step: 1, .. })));
    }

    #[test]
    fn conserves_mass_and_reverses_in_time() {
        let c = setup(1.5, 32, 0.3).with_diag_every(20);
        let u = smooth(&c.grid, 0.2);
        let t = solve(&u, &c).unwrap();
        assert!(t.mass_drift() < 1e-10, "{}", t.mass_drift());
        assert!(t.energy_drift().unwrap() < 1e-8);
        assert!((mass(&t.final_state).unwrap() - mass(&u).unwrap()).abs() < 1e-10);
        let back = solve(&time_reverse(&t.final_state), &c).unwrap();
        let again = time_reverse(&back.final_state);
        assert!(again.sub(&u).unwrap().l2_norm() < 1e-9 * u.l2_norm());
        assert!(t.times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(t.times.len(), t.diagnostics.len());
    }
}
