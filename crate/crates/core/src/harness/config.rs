//! TOML run configuration.
//!
//! ```toml
//! kind = "verify-bilinear"   # optional when given on the command line
//! seed = 2024
//! out_dir = "out/bilinear"   # optional
//!
//! [params]
//! family = "isotropic"       # isotropic | multi-directional | ribaud-vento
//! a = [1.0, 1.5, 2.0]        # one value or a sweep
//! n = 2
//!
//! [grid]
//! M = 256
//!
//! [probe]
//! high = [16, 32, 64]
//! low = [1, 2]
//! trials = 50
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::kind::Kind;
use crate::dispersion::Enumeration;
use crate::evolution::Dealias;
use crate::spectral::Family;

/// A scalar or a list of scalars.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    pub params: ParamsSection,
    #[serde(default)]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub probe: Option<ProbeSection>,
    #[serde(default)]
    pub kernel: Option<KernelSection>,
    #[serde(default)]
    pub transversality: Option<TransversalitySection>,
    #[serde(default)]
    pub resonance: Option<ResonanceSection>,
    #[serde(default)]
    pub solver: Option<SolverSection>,
    #[serde(default)]
    pub datum: Option<DatumSection>,
    #[serde(default)]
    pub bona_smith: Option<BonaSmithSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    #[serde(default = "default_family")]
    pub family: Family,
    pub a: OneOrMany<f64>,
    pub n: usize,
    #[serde(default = "default_period")]
    pub period: f64,
}

fn default_family() -> Family {
    Family::Isotropic
}

fn default_period() -> f64 {
    2.0 * std::f64::consts::PI
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "M")]
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub high: OneOrMany<u32>,
    #[serde(default)]
    pub low: Option<OneOrMany<u32>>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default, rename = "T")]
    pub time_horizon: Option<f64>,
    #[serde(default)]
    pub time_samples: Option<usize>,
    #[serde(default)]
    pub allow_wrap: bool,
    /// Time exponent of the linear estimate.
    #[serde(default)]
    pub q: Option<f64>,
    /// Space exponent of the linear estimate.
    #[serde(default)]
    pub p: Option<f64>,
}

fn default_trials() -> usize {
    50
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    /// Explicit times; defaults to `1, 2, …, t_max`.
    #[serde(default)]
    pub t: Option<Vec<f64>>,
    #[serde(default = "default_t_max")]
    pub t_max: u32,
    #[serde(default = "default_ratios")]
    pub ratios: usize,
    #[serde(default = "default_true")]
    pub transverse: bool,
    #[serde(default = "default_far")]
    pub far: usize,
}

fn default_t_max() -> u32 {
    64
}

fn default_ratios() -> usize {
    16
}

fn default_far() -> usize {
    16
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintName {
    HighHighHigh,
    SeparatedHighLow,
    ZkSmallFirstComponent,
    Shells,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransversalitySection {
    pub constraint: ConstraintName,
    /// Dyadic scales to scan (ignored for `shells`).
    #[serde(default, rename = "N")]
    pub scales: Option<OneOrMany<u32>>,
    /// Low shell for `separated-high-low`.
    #[serde(default)]
    pub low: Option<u32>,
    /// Three dyadic labels for `shells`.
    #[serde(default)]
    pub shells: Option<[u32; 3]>,
    #[serde(default = "default_enumeration")]
    pub enumeration: Enumeration,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_enumeration() -> Enumeration {
    Enumeration::Auto
}

fn default_samples() -> usize {
    1_000_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceSection {
    /// Every component of `ξ₁` and `ξ₂` ranges over `−radius..=radius`.
    pub radius: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    /// Step; defaults to the phase-resolution bound.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(default = "default_dealias")]
    pub dealias: Dealias,
    #[serde(default = "default_diag_every")]
    pub diag_every: usize,
    #[serde(default = "default_sobolev")]
    pub sobolev: Vec<f64>,
    #[serde(default)]
    pub snapshot_every: usize,
}

fn default_dealias() -> Dealias {
    Dealias::TwoThirds
}

fn default_diag_every() -> usize {
    10
}

fn default_sobolev() -> Vec<f64> {
    vec![1.0, 2.0, 3.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumSection {
    /// Random datum in `H^regularity` (Gaussian coefficients, seeded by `seed`).
    #[serde(default)]
    pub regularity: Option<f64>,
    /// Explicit real modes `[k₁, …, kₙ, re, im]`, each added with its conjugate.
    #[serde(default)]
    pub modes: Option<Vec<Vec<f64>>>,
    /// Rescale to this `H^{norm_s}` norm.
    #[serde(default)]
    pub norm: Option<f64>,
    #[serde(default)]
    pub norm_s: f64,
    /// Largest `|kⱼ|` populated; defaults to the dealiased band.
    #[serde(default)]
    pub max_k: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BonaSmithSection {
    pub s: f64,
    pub cutoffs: Vec<u32>,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Names of the optional sections present in the file.
    pub(crate) fn sections(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut add = |present: bool, name| {
            if present {
                out.push(name)
            }
        };
        add(self.grid.is_some(), "grid");
        add(self.probe.is_some(), "probe");
        add(self.kernel.is_some(), "kernel");
        add(self.transversality.is_some(), "transversality");
        add(self.resonance.is_some(), "resonance");
        add(self.solver.is_some(), "solver");
        add(self.datum.is_some(), "datum");
        add(self.bona_smith.is_some(), "bona_smith");
        out
    }

    /// Kind from the file, checked against the command-line kind if both are given.
    pub fn resolve_kind(&self, cli: Option<Kind>) -> Result<Kind, String> {
        let file = self.kind.as_deref().map(Kind::parse).transpose()?;
        match (cli, file) {
            (Some(c), Some(f)) if c != f => Err(format!("kind mismatch: command line says {c}, config says {f}")),
            (Some(k), _) | (None, Some(k)) => Ok(k),
            (None, None) => Err("no experiment kind given".into()),
        }
    }
}
