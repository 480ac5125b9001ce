use thiserror::Error;

/// Errors raised by grid construction, spectral operators, verifiers and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("shell beyond grid: N = {shell} exceeds the largest representable dyadic {max}")]
    ShellBeyondGrid { shell: u32, max: u32 },

    #[error("grids do not match")]
    GridMismatch,

    #[error("anisotropic norm defined for n = 2 (got n = {0})")]
    AnisotropicDimension(usize),

    #[error("group velocity singular at origin")]
    SingularGroupVelocity,

    #[error("resonance partials require IsotropicFZK with a = 2 and n = 2")]
    ResonancePartialsUnsupported,

    #[error("no admissible triples")]
    NoAdmissibleTriples,

    #[error("kernel estimate stated for n >= 3 (got n = {0})")]
    KernelDimension(usize),

    #[error("not admissible: {0}")]
    NotAdmissible(String),

    #[error("shells not separated: K = {low} > N/8 with N = {high}")]
    ShellsNotSeparated { high: u32, low: u32 },

    #[error("time horizon rejected: {0}")]
    TimeHorizon(String),

    #[error("time resolution: {0}")]
    TimeResolution(String),

    #[error("{0} defined for real fields")]
    NotReal(&'static str),

    #[error("blow-up or instability at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },

    #[error("malformed field file: {0}")]
    Format(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}
