//! Reproducible experiment runs: TOML configs, seeded execution, CSV/JSON
//! artifacts, SVG plots and a digest manifest.
//!
//! Every run writes into one output directory; `manifest.json` lists every
//! file there with its SHA-256 and echoes the resolved config.

mod artifacts;
mod config;
mod kind;
mod plot;
mod run;

pub use artifacts::{sha256_hex, Artifacts, FileEntry, Manifest, MANIFEST};
pub use config::{
    BonaSmithSection, ConstraintName, DatumSection, ExperimentSpec, GridSection, KernelSection, OneOrMany,
    ParamsSection, ProbeSection, ResonanceSection, SolverSection, TransversalitySection,
};
pub use kind::{describe, Kind};
pub use plot::{render, PlotSpec};
pub use run::{run, run_toml, HarnessError, RunOptions, RunOutcome, OUT_DIR_ENV};
