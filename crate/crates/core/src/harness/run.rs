use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use super::artifacts::{Artifacts, Manifest};
use super::config::{ConstraintName, DatumSection, ExperimentSpec, ProbeSection, SolverSection};
use super::kind::Kind;
use super::plot::{render, PlotSpec};
use crate::dispersion::{
    min_transversality_with, resonance, resonance_exact, Constraint, TransversalityOptions, TransversalityReport,
};
use crate::error::{csv_err, Error};
use crate::estimates::{
    bilinear_ratio, kernel_decay_scan, linear_strichartz_ratio, loglog_slope, shorttime_amelioration, spread,
    write_reports_csv, EstimateProbe, ProbeShells, RadialProfile, RatioReport, XSampler,
};
use crate::evolution::{bona_smith, normalize_sobolev, random_datum, solve, SolverConfig};
use crate::spectral::{DispersionParams, Field, SpectralGrid};

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "FZK_OUT_DIR";

/// Failure classes with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Numerical(Error),
    #[error("{0}")]
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Schema(_) => 2,
            HarnessError::Numerical(_) => 3,
            HarnessError::Io(_) => 4,
        }
    }

    /// Machine-readable form written to stderr by the CLI.
    pub fn to_json(&self) -> serde_json::Value {
        let class = match self {
            HarnessError::Schema(_) => "schema",
            HarnessError::Numerical(_) => "numerical",
            HarnessError::Io(_) => "io",
        };
        serde_json::json!({
            "error": class,
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
    }
}

impl From<Error> for HarnessError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => HarnessError::Io(io.to_string()),
            Error::Json(j) => HarnessError::Io(j.to_string()),
            Error::Format(f) => HarnessError::Io(f),
            other => HarnessError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

type Res<T> = std::result::Result<T, HarnessError>;

fn schema<T>(msg: impl Into<String>) -> Res<T> {
    Err(HarnessError::Schema(msg.into()))
}

/// Command-line overrides applied on top of a config file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub kind: Option<Kind>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub kind: Kind,
    pub out_dir: PathBuf,
    pub manifest: Manifest,
    pub summary: serde_json::Value,
}

/// Parses a TOML config and runs it.
pub fn run_toml(text: &str, opts: &RunOptions) -> Res<RunOutcome> {
    let spec = ExperimentSpec::from_toml(text).map_err(|e| HarnessError::Schema(e.message().to_string()))?;
    run(&spec, opts)
}

/// Validates `spec` against its kind, runs it and writes the artifacts plus
/// `manifest.json` into the output directory.
pub fn run(spec: &ExperimentSpec, opts: &RunOptions) -> Res<RunOutcome> {
    let kind = spec.resolve_kind(opts.kind).map_err(HarnessError::Schema)?;
    let (required, optional) = kind.sections();
    let present = spec.sections();
    for r in required {
        if !present.contains(r) {
            return schema(format!("kind {kind} needs a [{r}] section"));
        }
    }
    for p in &present {
        if !required.contains(p) && !optional.contains(p) {
            return schema(format!("section [{p}] is not used by kind {kind}"));
        }
    }
    let mut resolved = spec.clone();
    resolved.kind = Some(kind.slug().to_string());
    if let Some(s) = opts.seed {
        resolved.seed = s;
    }
    let out_dir = opts
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| resolved.out_dir.clone())
        .unwrap_or_else(|| Path::new("out").join(kind.slug()));
    resolved.out_dir = Some(out_dir.clone());
    let params = resolve_params(&resolved)?;
    let art = Artifacts::create(&out_dir)?;
    let summary = match kind {
        Kind::VerifyBilinear | Kind::VerifyShorttime | Kind::VerifyLinearStrichartz => {
            run_ratios(kind, &resolved, &params, &art)?
        }
        Kind::VerifyKernel => run_kernel(&resolved, &params, &art)?,
        Kind::Transversality => run_transversality(&resolved, &params, &art)?,
        Kind::ResonanceScan => run_resonance(&resolved, &params, &art)?,
        Kind::Simulate => run_simulate(&resolved, single(&params, kind)?, &art)?,
        Kind::BonaSmith => run_bona_smith(&resolved, single(&params, kind)?, &art)?,
    };
    let summary = serde_json::json!({ "kind": kind.slug(), "seed": resolved.seed, "results": summary });
    art.write_json("summary.json", &summary)?;
    let echo = serde_json::to_value(&resolved).map_err(Error::from)?;
    let manifest = art.finish(echo)?;
    Ok(RunOutcome {
        kind,
        out_dir,
        manifest,
        summary,
    })
}

fn resolve_params(spec: &ExperimentSpec) -> Res<Vec<DispersionParams>> {
    let p = &spec.params;
    let values = p.a.values();
    if values.is_empty() {
        return schema("params.a is empty");
    }
    values
        .into_iter()
        .map(|a| {
            DispersionParams::with_period(p.family, a, p.n, p.period).map_err(|e| HarnessError::Schema(e.to_string()))
        })
        .collect()
}

fn single(params: &[DispersionParams], kind: Kind) -> Res<DispersionParams> {
    match params {
        [p] => Ok(*p),
        _ => schema(format!("kind {kind} takes a single value of params.a")),
    }
}

fn resolve_grid(spec: &ExperimentSpec) -> Res<SpectralGrid> {
    let g = spec.grid.as_ref().expect("checked by section rules");
    SpectralGrid::new(spec.params.n, g.m, spec.params.period).map_err(|e| HarnessError::Schema(e.to_string()))
}

fn csv_file(path: &Path) -> Res<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn plot(art: &Artifacts, csv_name: &str, svg_name: &str, spec: PlotSpec) -> Res<()> {
    let svg = render(&art.path(csv_name), &spec)?;
    art.write(svg_name, svg)?;
    Ok(())
}

#[derive(Serialize)]
struct RatioSummaryRow<'a> {
    experiment: &'a str,
    family: &'a str,
    a: f64,
    n: usize,
    #[serde(rename = "N")]
    n_high: u32,
    #[serde(rename = "K")]
    k_low: Option<u32>,
    #[serde(rename = "T")]
    horizon: f64,
    time_samples: usize,
    max_ratio: f64,
    mean_ratio: f64,
    trials: usize,
}

fn run_ratios(
    kind: Kind,
    spec: &ExperimentSpec,
    params: &[DispersionParams],
    art: &Artifacts,
) -> Res<serde_json::Value> {
    let grid = resolve_grid(spec)?;
    let probe_cfg: &ProbeSection = spec.probe.as_ref().expect("checked by section rules");
    let highs = probe_cfg.high.values();
    let lows: Vec<Option<u32>> = match (kind, &probe_cfg.low) {
        (Kind::VerifyLinearStrichartz, None) => vec![None],
        (Kind::VerifyLinearStrichartz, Some(_)) => return schema("probe.low is not used by verify-linear-strichartz"),
        (_, Some(l)) => l.values().into_iter().map(Some).collect(),
        (_, None) => return schema(format!("kind {kind} needs probe.low")),
    };
    if kind != Kind::VerifyLinearStrichartz && (probe_cfg.q.is_some() || probe_cfg.p.is_some()) {
        return schema(format!("probe.q and probe.p are not used by kind {kind}"));
    }
    let (q, p) = (probe_cfg.q.unwrap_or(4.0), probe_cfg.p.unwrap_or(4.0));
    let mut reports: Vec<RatioReport> = Vec::new();
    for params in params {
        for &low in &lows {
            for &high in &highs {
                let shells = match low {
                    Some(low) => ProbeShells::Pair { high, low },
                    None => ProbeShells::Single(high),
                };
                let mut probe = EstimateProbe::new(*params, grid.clone(), shells)?
                    .with_trials(probe_cfg.trials)
                    .with_seed(spec.seed);
                probe.time_horizon = probe_cfg.time_horizon;
                probe.time_samples = probe_cfg.time_samples;
                probe.allow_wrap = probe_cfg.allow_wrap;
                reports.push(match kind {
                    Kind::VerifyBilinear => bilinear_ratio(&probe)?,
                    Kind::VerifyShorttime => shorttime_amelioration(&probe)?,
                    _ => linear_strichartz_ratio(&probe, q, p)?,
                });
            }
        }
    }
    write_reports_csv(&art.path("trials.csv"), &reports)?;
    let mut w = csv_file(&art.path("summary.csv"))?;
    for r in &reports {
        w.serialize(RatioSummaryRow {
            experiment: &r.experiment,
            family: &r.family,
            a: r.a,
            n: r.n,
            n_high: r.n_high,
            k_low: r.k_low,
            horizon: r.time_horizon,
            time_samples: r.time_samples,
            max_ratio: r.ratio,
            mean_ratio: r.mean_ratio,
            trials: r.trials.len(),
        })
        .map_err(csv_err)?;
    }
    w.flush()?;
    drop(w);
    let group_by: &[&str] = if kind == Kind::VerifyLinearStrichartz {
        &["a"]
    } else {
        &["a", "K"]
    };
    plot(
        art,
        "summary.csv",
        "ratios.svg",
        PlotSpec {
            title: &format!("{kind}: max ratio over trials"),
            x: "N",
            y: &["max_ratio"],
            group_by,
            log_x: true,
            log_y: true,
            scatter: false,
        },
    )?;
    let mut groups = Vec::new();
    for params in params {
        for &low in &lows {
            let sel: Vec<&RatioReport> = reports.iter().filter(|r| r.a == params.a && r.k_low == low).collect();
            let ns: Vec<f64> = sel.iter().map(|r| r.n_high as f64).collect();
            let ratios: Vec<f64> = sel.iter().map(|r| r.ratio).collect();
            groups.push(serde_json::json!({
                "a": params.a,
                "K": low,
                "N": ns,
                "max_ratio": ratios,
                "spread": spread(&ratios),
                "loglog_slope": if ns.len() > 1 { Some(loglog_slope(&ns, &ratios)) } else { None },
            }));
        }
    }
    Ok(serde_json::json!({
        "reports": reports.iter().map(RatioReport::summary_json).collect::<Vec<_>>(),
        "groups": groups,
    }))
}

fn run_kernel(spec: &ExperimentSpec, params: &[DispersionParams], art: &Artifacts) -> Res<serde_json::Value> {
    let k = spec.kernel.clone().unwrap_or(super::config::KernelSection {
        t: None,
        t_max: 64,
        ratios: 16,
        transverse: true,
        far: 16,
    });
    let ts: Vec<f64> = k.t.clone().unwrap_or_else(|| (1..=k.t_max).map(f64::from).collect());
    let sampler = XSampler {
        ratios: k.ratios,
        transverse: k.transverse,
        far: k.far,
        seed: spec.seed,
    };
    let n = spec.params.n;
    let mut w = csv_file(&art.path("kernel.csv"))?;
    let mut header = vec!["a".to_string(), "t".into(), "scaled_sup".into()];
    header.extend((1..=n).map(|i| format!("argmax_x{i}")));
    header.extend(["points".to_string(), "refinement_change".into()]);
    w.write_record(&header).map_err(csv_err)?;
    let mut out = Vec::new();
    for p in params {
        let rep = kernel_decay_scan(p, &ts, &sampler, &RadialProfile::annular())?;
        for row in &rep.rows {
            let mut rec = vec![p.a.to_string(), row.t.to_string(), row.scaled_sup.to_string()];
            rec.extend(row.argmax.iter().map(|v| v.to_string()));
            rec.extend([row.points.to_string(), row.refinement_change.to_string()]);
            w.write_record(&rec).map_err(csv_err)?;
        }
        out.push(serde_json::json!({
            "a": rep.a,
            "n": rep.n,
            "profile": rep.profile,
            "c_emp": rep.c_emp,
            "growth": rep.growth,
            "max_refinement_change": rep.max_refinement_change,
            "pass": rep.pass,
        }));
    }
    w.flush()?;
    drop(w);
    plot(
        art,
        "kernel.csv",
        "kernel.svg",
        PlotSpec {
            title: "|t| · sup_x |I(x,t)|",
            x: "t",
            y: &["scaled_sup"],
            group_by: &["a"],
            log_x: true,
            log_y: true,
            scatter: false,
        },
    )?;
    Ok(serde_json::Value::Array(out))
}

fn constraint_for(spec: &ExperimentSpec) -> Res<(Constraint, Vec<u32>)> {
    let t = spec.transversality.as_ref().expect("checked by section rules");
    let scales = || -> Res<Vec<u32>> {
        match &t.scales {
            Some(s) => Ok(s.values()),
            None => schema("transversality.N is required for this constraint"),
        }
    };
    if t.low.is_some() && t.constraint != ConstraintName::SeparatedHighLow {
        return schema("transversality.low is only used by separated-high-low");
    }
    if t.shells.is_some() && t.constraint != ConstraintName::Shells {
        return schema("transversality.shells is only used by the shells constraint");
    }
    Ok(match t.constraint {
        ConstraintName::HighHighHigh => (Constraint::HighHighHigh, scales()?),
        ConstraintName::ZkSmallFirstComponent => (Constraint::ZkSmallFirstComponent, scales()?),
        ConstraintName::SeparatedHighLow => match t.low {
            Some(low) => (Constraint::SeparatedHighLow { low }, scales()?),
            None => return schema("separated-high-low needs transversality.low"),
        },
        ConstraintName::Shells => match t.shells {
            Some(s) => {
                if t.scales.is_some() {
                    return schema("transversality.N is not used by the shells constraint");
                }
                (Constraint::Shells(s), vec![*s.iter().max().expect("three labels")])
            }
            None => return schema("the shells constraint needs transversality.shells"),
        },
    })
}

fn run_transversality(spec: &ExperimentSpec, params: &[DispersionParams], art: &Artifacts) -> Res<serde_json::Value> {
    let t = spec.transversality.as_ref().expect("checked by section rules");
    let (constraint, scales) = constraint_for(spec)?;
    let opts = TransversalityOptions {
        enumeration: t.enumeration,
        seed: spec.seed,
        samples: t.samples,
        ..TransversalityOptions::default()
    };
    let mut reports: Vec<TransversalityReport> = Vec::new();
    for p in params {
        for &n in &scales {
            let r = min_transversality_with(n, p, constraint, &opts)?;
            r.revalidate()?;
            reports.push(r);
        }
    }
    let mut w = csv_file(&art.path("transversality.csv"))?;
    w.write_record([
        "N",
        "a",
        "n",
        "family",
        "constraint",
        "c_min",
        "gap",
        "normalization",
        "triples_scanned",
        "sampled",
        "seed",
        "witness",
    ])
    .map_err(csv_err)?;
    for r in &reports {
        let witness = r
            .witness
            .xi
            .iter()
            .map(|v| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.n_dyadic.to_string(),
            r.params.a.to_string(),
            r.params.n.to_string(),
            r.params.family.to_string(),
            r.constraint.to_string(),
            r.c_min.to_string(),
            r.gap.to_string(),
            r.normalization.to_string(),
            r.triples_scanned.to_string(),
            r.sampled.to_string(),
            r.seed.to_string(),
            witness,
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    drop(w);
    let json: Vec<serde_json::Value> = reports.iter().map(TransversalityReport::to_json).collect();
    art.write_json("reports.json", &json)?;
    plot(
        art,
        "transversality.csv",
        "cmin.svg",
        PlotSpec {
            title: "normalized minimum transversality",
            x: "N",
            y: &["c_min"],
            group_by: &["a"],
            log_x: true,
            log_y: true,
            scatter: false,
        },
    )?;
    Ok(serde_json::Value::Array(json))
}

/// Largest resonance table written in one run.
const MAX_RESONANCE_ROWS: u64 = 5_000_000;

fn run_resonance(spec: &ExperimentSpec, params: &[DispersionParams], art: &Artifacts) -> Res<serde_json::Value> {
    let r = spec.resonance.as_ref().expect("checked by section rules").radius;
    let n = spec.params.n;
    if r < 0 {
        return schema("resonance.radius must be >= 0");
    }
    let side = (2 * r + 1) as u64;
    let rows = side.checked_pow(2 * n as u32).map(|v| v * params.len() as u64);
    if rows.is_none_or(|v| v > MAX_RESONANCE_ROWS) {
        return schema(format!("resonance table would exceed {MAX_RESONANCE_ROWS} rows"));
    }
    let mut w = csv_file(&art.path("resonance.csv"))?;
    let mut header = vec!["a".to_string()];
    header.extend((1..=n).map(|i| format!("xi1_{i}")));
    header.extend((1..=n).map(|i| format!("xi2_{i}")));
    header.extend(["sum_norm".to_string(), "omega".into(), "omega_exact".into()]);
    w.write_record(&header).map_err(csv_err)?;
    let mut out = Vec::new();
    for p in params {
        let unit = p.frequency_unit();
        let mut count = 0u64;
        let mut max_abs: f64 = 0.0;
        let mut k = vec![-r; 2 * n];
        loop {
            let (k1, k2) = k.split_at(n);
            let x1: Vec<f64> = k1.iter().map(|&v| v as f64 * unit).collect();
            let x2: Vec<f64> = k2.iter().map(|&v| v as f64 * unit).collect();
            let omega = resonance(p, &x1, &x2);
            let exact = if unit == 1.0 { resonance_exact(p, k1, k2) } else { None };
            let sum_norm = x1.iter().zip(&x2).map(|(a, b)| (a + b) * (a + b)).sum::<f64>().sqrt();
            let mut rec = vec![p.a.to_string()];
            rec.extend(k.iter().map(i64::to_string));
            rec.extend([
                sum_norm.to_string(),
                omega.to_string(),
                exact.map(|e| e.to_string()).unwrap_or_default(),
            ]);
            w.write_record(&rec).map_err(csv_err)?;
            count += 1;
            max_abs = max_abs.max(omega.abs());
            if !advance(&mut k, r) {
                break;
            }
        }
        out.push(serde_json::json!({ "a": p.a, "rows": count, "max_abs_omega": max_abs }));
    }
    w.flush()?;
    drop(w);
    plot(
        art,
        "resonance.csv",
        "resonance.svg",
        PlotSpec {
            title: "Ω(ξ₁, ξ₂) against |ξ₁ + ξ₂|",
            x: "sum_norm",
            y: &["omega"],
            group_by: &["a"],
            log_x: false,
            log_y: false,
            scatter: true,
        },
    )?;
    Ok(serde_json::Value::Array(out))
}

/// Odometer over `[−r, r]^len`; false once every point has been visited.
fn advance(k: &mut [i64], r: i64) -> bool {
    for v in k.iter_mut().rev() {
        if *v < r {
            *v += 1;
            return true;
        }
        *v = -r;
    }
    false
}

fn solver_config(spec: &ExperimentSpec, params: DispersionParams, grid: &SpectralGrid) -> Res<SolverConfig> {
    let s: &SolverSection = spec.solver.as_ref().expect("checked by section rules");
    let base = match s.dt {
        Some(dt) => SolverConfig::new(params, grid.clone(), dt, s.horizon),
        None => SolverConfig::at_phase_bound(params, grid.clone(), s.horizon),
    };
    let mut cfg = base?;
    cfg.dealias = s.dealias;
    cfg.diag_every = s.diag_every;
    cfg.sobolev = s.sobolev.clone();
    cfg.snapshot_every = s.snapshot_every;
    cfg.validate()?;
    Ok(cfg)
}

fn build_datum(spec: &ExperimentSpec, cfg: &SolverConfig) -> Res<Field> {
    let d: &DatumSection = spec.datum.as_ref().expect("checked by section rules");
    let grid = &cfg.grid;
    let n = grid.dim();
    let f = match (&d.modes, d.regularity) {
        (Some(modes), None) => {
            let mut list = Vec::new();
            for m in modes {
                if m.len() != n + 2 || m[..n].iter().any(|v| v.fract() != 0.0) {
                    return schema(format!(
                        "datum mode {m:?} must be [k₁, …, k_{n}, re, im] with integer k"
                    ));
                }
                let k: Vec<i64> = m[..n].iter().map(|&v| v as i64).collect();
                list.push((k, Complex64::new(m[n], m[n + 1])));
            }
            Field::real_from_modes(grid, &list).map_err(|e| HarnessError::Schema(e.to_string()))?
        }
        (None, Some(r)) => random_datum(grid, r, Some(d.max_k.unwrap_or(cfg.retained_wavenumber())), spec.seed),
        _ => return schema("datum needs exactly one of regularity or modes"),
    };
    Ok(match d.norm {
        Some(norm) => normalize_sobolev(&f, d.norm_s).scale(norm),
        None => f,
    })
}

fn run_simulate(spec: &ExperimentSpec, params: DispersionParams, art: &Artifacts) -> Res<serde_json::Value> {
    let grid = resolve_grid(spec)?;
    let cfg = solver_config(spec, params, &grid)?;
    let u0 = build_datum(spec, &cfg)?;
    let traj = solve(&u0, &cfg)?;
    traj.write_diagnostics_csv(BufWriter::new(File::create(art.path("diagnostics.csv"))?))?;
    let snaps = art.subdir("snapshots")?;
    traj.write_snapshots(&snaps, "snapshot")?;
    let mut w = csv_file(&art.path("shells.csv"))?;
    w.write_record(["N", "sup_l2"]).map_err(csv_err)?;
    let last = traj.diagnostics.last().expect("non-empty");
    for (n, v) in traj.shells.iter().zip(&last.shell_sup) {
        w.write_record([n.to_string(), v.to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    drop(w);
    plot(
        art,
        "shells.csv",
        "shells.svg",
        PlotSpec {
            title: "sup_t ‖P_N u(t)‖ per dyadic shell",
            x: "N",
            y: &["sup_l2"],
            group_by: &[],
            log_x: true,
            log_y: true,
            scatter: false,
        },
    )?;
    Ok(serde_json::json!({
        "a": params.a,
        "dt": cfg.steps().1,
        "steps": cfg.steps().0,
        "T": traj.final_time(),
        "samples": traj.times.len(),
        "snapshots": traj.snapshots.len(),
        "mass_drift": traj.mass_drift(),
        "energy_drift": traj.energy_drift(),
    }))
}

fn run_bona_smith(spec: &ExperimentSpec, params: DispersionParams, art: &Artifacts) -> Res<serde_json::Value> {
    let grid = resolve_grid(spec)?;
    let cfg = solver_config(spec, params, &grid)?;
    let u0 = build_datum(spec, &cfg)?;
    let b = spec.bona_smith.as_ref().expect("checked by section rules");
    let table = bona_smith(&u0, b.s, &b.cutoffs, &cfg)?;
    table.write_csv(BufWriter::new(File::create(art.path("bona_smith.csv"))?))?;
    plot(
        art,
        "bona_smith.csv",
        "bona_smith.svg",
        PlotSpec {
            title: "sup_t ‖u − u_N‖",
            x: "N",
            y: &["sup_l2", "sup_hs"],
            group_by: &[],
            log_x: true,
            log_y: true,
            scatter: false,
        },
    )?;
    Ok(serde_json::json!({
        "table": table,
        "nonincreasing_l2": table.nonincreasing(false, 1e-12),
        "nonincreasing_hs": table.nonincreasing(true, 1e-12),
        "decay_l2": table.decay_factors(false),
        "decay_hs": table.decay_factors(true),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(dir: &Path) -> RunOptions {
        RunOptions {
            out_dir: Some(dir.to_path_buf()),
            ..RunOptions::default()
        }
    }

    #[test]
    fn resonance_scan_row() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = "kind = \"ResonanceScan\"\n[params]\na = 2.0\nn = 2\n[resonance]\nradius = 4\n";
        let out = run_toml(cfg, &opts(dir.path())).unwrap();
        let text = std::fs::read_to_string(dir.path().join("resonance.csv")).unwrap();
        assert!(text.lines().any(|l| l.starts_with("2,1,0,1,0,") && l.ends_with(",6,6")));
        assert_eq!(text.lines().count(), 1 + 9usize.pow(4));
        let listed: Vec<&str> = out.manifest.files.iter().map(|f| f.path.as_str()).collect();
        assert_eq!(listed, vec!["resonance.csv", "resonance.svg", "summary.json"]);
    }

    #[test]
    fn schema_errors_exit_2() {
        let dir = tempfile::tempdir().unwrap();
        let e = run_toml("kind = \"warp\"\n[params]\na = 2.0\nn = 2\n", &opts(dir.path())).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("unknown experiment kind"));
        let e = run_toml(
            "kind = \"resonance-scan\"\nbogus = 1\n[params]\na = 2.0\nn = 2\n",
            &opts(dir.path()),
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_toml(
            "kind = \"resonance-scan\"\n[params]\na = 2.0\nn = 2\n",
            &opts(dir.path()),
        )
        .unwrap_err();
        assert!(e.to_string().contains("[resonance]"));
        let e = run_toml(
            "kind = \"resonance-scan\"\n[params]\na = 2.0\nn = 2\n[resonance]\nradius = 1\n[grid]\nM = 8\n",
            &opts(dir.path()),
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_toml(
            "kind = \"resonance-scan\"\n[params]\na = 3.0\nn = 2\n[resonance]\nradius = 1\n",
            &opts(dir.path()),
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn numerical_errors_exit_3() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = "kind = \"transversality\"\n[params]\na = 2.0\nn = 2\n\
                   [transversality]\nconstraint = \"separated-high-low\"\nN = 8\nlow = 4\n";
        let e = run_toml(cfg, &opts(dir.path())).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert_eq!(e.to_json()["error"], "numerical");
    }

    #[test]
    fn simulate_with_zero_horizon() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = "kind = \"simulate\"\nseed = 5\n[params]\na = 1.5\nn = 2\n[grid]\nM = 16\n\
                   [solver]\nT = 0.0\n[datum]\nregularity = 3.0\nnorm = 1.0\nnorm_s = 3.0\n";
        let out = run_toml(cfg, &opts(dir.path())).unwrap();
        assert_eq!(out.summary["results"]["snapshots"], 1);
        let snaps: Vec<&str> = out
            .manifest
            .files
            .iter()
            .map(|f| f.path.as_str())
            .filter(|p| p.starts_with("snapshots/"))
            .collect();
        assert_eq!(
            snaps,
            vec!["snapshots/snapshot_00000.fzk", "snapshots/snapshot_00000.fzk.json"]
        );
        assert_eq!(out.manifest.spec_echo["seed"], 5);
    }

    #[test]
    fn cli_overrides_seed_and_checks_kind() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = "kind = \"resonance-scan\"\n[params]\na = 2.0\nn = 2\n[resonance]\nradius = 1\n";
        let o = RunOptions {
            seed: Some(9),
            ..opts(dir.path())
        };
        assert_eq!(run_toml(cfg, &o).unwrap().manifest.spec_echo["seed"], 9);
        let o = RunOptions {
            kind: Some(Kind::Simulate),
            ..opts(dir.path())
        };
        assert_eq!(run_toml(cfg, &o).unwrap_err().exit_code(), 2);
    }
}
