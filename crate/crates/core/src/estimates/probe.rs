use std::f64::consts::FRAC_PI_4;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dispersion::group_speed;
use crate::error::{csv_err, Error, Result};
use crate::spectral::{DispersionParams, DyadicShell, Field, SpectralGrid};

/// Shell labels for an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeShells {
    Single(u32),
    Pair { high: u32, low: u32 },
}

impl ProbeShells {
    pub fn high(&self) -> u32 {
        match *self {
            ProbeShells::Single(n) => n,
            ProbeShells::Pair { high, .. } => high,
        }
    }

    pub fn low(&self) -> Option<u32> {
        match *self {
            ProbeShells::Single(_) => None,
            ProbeShells::Pair { low, .. } => Some(low),
        }
    }
}

/// Configuration shared by the ratio experiments.
#[derive(Clone, Debug)]
pub struct EstimateProbe {
    pub params: DispersionParams,
    pub grid: SpectralGrid,
    pub shells: ProbeShells,
    /// `None` selects the experiment's default horizon.
    pub time_horizon: Option<f64>,
    /// Number of time intervals; `None` picks a resolved default.
    pub time_samples: Option<usize>,
    pub rng_seed: u64,
    pub trials: usize,
    /// Disables the wrap-around horizon check.
    pub allow_wrap: bool,
}

impl EstimateProbe {
    pub fn new(params: DispersionParams, grid: SpectralGrid, shells: ProbeShells) -> Result<Self> {
        if grid.dim() != params.n {
            return Err(Error::InvalidParams(format!(
                "grid dimension {} differs from n = {}",
                grid.dim(),
                params.n
            )));
        }
        if grid.period() != params.period {
            return Err(Error::InvalidParams(format!(
                "grid period {} differs from the symbol period {}",
                grid.period(),
                params.period
            )));
        }
        Ok(EstimateProbe {
            params,
            grid,
            shells,
            time_horizon: None,
            time_samples: None,
            rng_seed: 0,
            trials: 50,
            allow_wrap: false,
        })
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_time_horizon(mut self, t: f64) -> Self {
        self.time_horizon = Some(t);
        self
    }

    pub fn with_time_samples(mut self, s: usize) -> Self {
        self.time_samples = Some(s);
        self
    }

    /// Seed of trial `i`.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.rng_seed.wrapping_add(trial as u64)
    }

    /// Lattice modes of a sharp shell; errors when the shell does not fit
    /// strictly inside the grid.
    pub(crate) fn shell_modes(&self, n: u32) -> Result<ShellModes> {
        ShellModes::new(&self.grid, &self.params, DyadicShell::sharp(n)?)
    }

    /// Intervals needed for `Δt·max|φ| ≤ π/4`, or the configured count after
    /// checking it against that bound.
    pub(crate) fn intervals(&self, horizon: f64, max_phase: f64) -> Result<usize> {
        let needed = ((horizon * max_phase) / FRAC_PI_4).ceil().max(1.0) as usize;
        match self.time_samples {
            Some(s) if s >= needed => Ok(s),
            Some(s) => Err(Error::TimeResolution(format!(
                "{s} intervals leave Δt·max|φ| = {:.4} > π/4 (need at least {needed})",
                horizon / s as f64 * max_phase
            ))),
            // fourfold oversampling keeps the trapezoid error well below 1e-4
            None => Ok((4 * needed).max(16)),
        }
    }

    pub(crate) fn rng(&self, trial: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.trial_seed(trial))
    }
}

/// Lattice modes of one sharp shell with their symbols.
#[derive(Clone, Debug)]
pub(crate) struct ShellModes {
    pub flat: Vec<usize>,
    pub max_phase: f64,
    pub max_speed: f64,
}

impl ShellModes {
    pub fn new(grid: &SpectralGrid, params: &DispersionParams, shell: DyadicShell) -> Result<Self> {
        let (_, hi) = shell.support();
        let m = grid.modes_per_dim();
        if hi / grid.frequency_unit() >= (m / 2) as f64 {
            let max = crate::spectral::max_dyadic(grid);
            return Err(Error::ShellBeyondGrid { shell: shell.n, max });
        }
        let mut flat = Vec::new();
        let mut max_phase: f64 = 0.0;
        let mut max_speed: f64 = 0.0;
        for i in 0..grid.len() {
            if shell.weight(grid.frequency_norm_sq(i)) != 0.0 {
                let xi = grid.frequency(i);
                flat.push(i);
                max_phase = max_phase.max(params.symbol(xi).abs());
                max_speed = max_speed.max(group_speed(params, xi));
            }
        }
        Ok(ShellModes {
            flat,
            max_phase,
            max_speed,
        })
    }

    /// i.i.d. complex Gaussian coefficients on the shell, Hermitian-symmetrised
    /// when `real`.
    pub fn random_field(&self, grid: &SpectralGrid, rng: &mut ChaCha8Rng, real: bool) -> Result<Field> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
        for &i in &self.flat {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            coeffs[i] = Complex64::new(re, im);
        }
        let f = Field::from_coefficients(grid, coeffs)?;
        Ok(if real { f.hermitian_symmetrize() } else { f })
    }

    /// `P_N f` as a sparse list of `(flat, coefficient)`.
    pub fn restrict(&self, f: &Field) -> Vec<(usize, Complex64)> {
        self.flat
            .iter()
            .map(|&i| (i, f.coeffs()[i]))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect()
    }
}

/// One trial of a ratio experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRatio {
    pub trial: usize,
    pub seed: u64,
    pub lhs: f64,
    pub rhs_scale: f64,
    pub ratio: f64,
}

impl TrialRatio {
    pub fn new(trial: usize, seed: u64, lhs: f64, rhs_scale: f64) -> Self {
        let ratio = if rhs_scale == 0.0 { 0.0 } else { lhs / rhs_scale };
        TrialRatio {
            trial,
            seed,
            lhs,
            rhs_scale,
            ratio,
        }
    }
}

/// Measured norm against the bound's scale, over all trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub experiment: String,
    pub family: String,
    pub a: f64,
    pub n: usize,
    #[serde(rename = "N")]
    pub n_high: u32,
    #[serde(rename = "K")]
    pub k_low: Option<u32>,
    pub exponents: Option<(f64, f64)>,
    #[serde(rename = "T")]
    pub time_horizon: f64,
    pub time_samples: usize,
    pub seed: u64,
    /// `lhs` and `rhs_scale` of the trial attaining the largest ratio.
    pub lhs: f64,
    pub rhs_scale: f64,
    pub ratio: f64,
    pub mean_ratio: f64,
    pub trials: Vec<TrialRatio>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    family: &'a str,
    a: f64,
    n: usize,
    #[serde(rename = "N")]
    n_high: u32,
    #[serde(rename = "K")]
    k_low: Option<u32>,
    #[serde(rename = "T")]
    time_horizon: f64,
    time_samples: usize,
    trial: usize,
    seed: u64,
    lhs: f64,
    rhs_scale: f64,
    ratio: f64,
}

impl RatioReport {
    pub(crate) fn assemble(
        experiment: &str,
        probe: &EstimateProbe,
        exponents: Option<(f64, f64)>,
        time_horizon: f64,
        time_samples: usize,
        trials: Vec<TrialRatio>,
    ) -> Self {
        let best = trials.iter().fold(None::<&TrialRatio>, |b, t| match b {
            Some(b) if b.ratio >= t.ratio => Some(b),
            _ => Some(t),
        });
        let (lhs, rhs_scale, ratio) = best.map_or((0.0, 0.0, 0.0), |b| (b.lhs, b.rhs_scale, b.ratio));
        let mean_ratio = if trials.is_empty() {
            0.0
        } else {
            trials.iter().map(|t| t.ratio).sum::<f64>() / trials.len() as f64
        };
        RatioReport {
            experiment: experiment.into(),
            family: probe.params.family.to_string(),
            a: probe.params.a,
            n: probe.params.n,
            n_high: probe.shells.high(),
            k_low: probe.shells.low(),
            exponents,
            time_horizon,
            time_samples,
            seed: probe.rng_seed,
            lhs,
            rhs_scale,
            ratio,
            mean_ratio,
            trials,
        }
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratio
    }

    /// Appends one CSV row per trial; writes the header when `header` is set.
    pub fn write_csv_rows<W: Write>(&self, out: W, header: bool) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(header).from_writer(out);
        for t in &self.trials {
            w.serialize(CsvRow {
                experiment: &self.experiment,
                family: &self.family,
                a: self.a,
                n: self.n,
                n_high: self.n_high,
                k_low: self.k_low,
                time_horizon: self.time_horizon,
                time_samples: self.time_samples,
                trial: t.trial,
                seed: t.seed,
                lhs: t.lhs,
                rhs_scale: t.rhs_scale,
                ratio: t.ratio,
            })
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Summary without per-trial rows.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "experiment": self.experiment,
            "family": self.family,
            "a": self.a,
            "n": self.n,
            "N": self.n_high,
            "K": self.k_low,
            "exponents": self.exponents,
            "T": self.time_horizon,
            "time_samples": self.time_samples,
            "seed": self.seed,
            "trials": self.trials.len(),
            "max_ratio": self.ratio,
            "mean_ratio": self.mean_ratio,
            "lhs": self.lhs,
            "rhs_scale": self.rhs_scale,
        })
    }
}

/// Writes several reports into one CSV file.
pub fn write_reports_csv(path: &Path, reports: &[RatioReport]) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    for (i, r) in reports.iter().enumerate() {
        r.write_csv_rows(&mut file, i == 0)?;
    }
    Ok(())
}

/// `max/min` of the given values; the uniformity statistic behind the
/// factor-two verdicts.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
