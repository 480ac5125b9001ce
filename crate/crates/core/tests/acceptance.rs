//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test --release --test acceptance`
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are run in full and reported as
//! FAIL; the run only exits nonzero when some other criterion fails or a
//! known failure stops failing in the documented way.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use fzk::dispersion::{
    min_transversality, min_transversality_with, resonance, resonance_exact, zk_resonance_expanded, Constraint,
    Enumeration, TransversalityOptions,
};
use fzk::estimates::{
    bilinear_ratio, kernel_decay_scan, shorttime_amelioration, spread, EstimateProbe, ProbeShells, RadialProfile,
    RatioReport, XSampler,
};
use fzk::evolution::{bona_smith, normalize_sobolev, random_datum, self_convergence, solve, SolverConfig};
use fzk::harness::{run_toml, RunOptions};
use fzk::spectral::{DispersionParams, Family, SpectralGrid};
use rand::Rng;

/// Criteria that cannot be met on a periodic box at desk scale; see README.
const KNOWN_UNATTAINABLE: &[u32] = &[6];

struct Verdict {
    pass: bool,
    details: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details
            .push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn within(&mut self, elapsed: Duration, budget_s: f64) {
        let secs = elapsed.as_secs_f64();
        self.check(secs < budget_s, format!("runtime {secs:.1} s (budget {budget_s:.0} s)"));
    }
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

type Criterion = fn(&mut Verdict) -> Result<(), String>;

fn c1_spectral(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    let grids = [(2, 16), (2, 64), (2, 256), (3, 8), (3, 32), (3, 64)];
    let (mut rt, mut pars, mut part, mut group, mut fields) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0);
    let mut tiling = 0;
    for (gi, &(n, m)) in grids.iter().enumerate() {
        for period in [2.0 * PI, 8.0 * PI, 3.0] {
            let g = SpectralGrid::new(n, m, period).map_err(|e| e.to_string())?;
            let reps = if g.len() <= 1 << 12 { 10 } else { 2 };
            for k in 0..reps {
                let seed = (gi * 1000 + k) as u64;
                rt = rt.max(roundtrip_error(&g, seed)).max(roundtrip_error_real(&g, seed));
                pars = pars.max(parseval_error(&random_field(&g, seed, k % 2 == 0)));
                fields += 1;
            }
            part = part.max(partition_error(&g));
            tiling += sharp_tiling_defects(&g);
            let f = random_field(&g, gi as u64, true);
            let families: &[Family] = if n == 2 {
                &[Family::Isotropic, Family::MultiDirectional, Family::RibaudVento]
            } else {
                &[Family::Isotropic, Family::MultiDirectional]
            };
            for &fam in families {
                for a in [1.0, 1.5, 2.0] {
                    let p = DispersionParams::with_period(fam, a, n, period).map_err(|e| e.to_string())?;
                    let scale = 1e3 / max_symbol(&g, &p);
                    group = group.max(group_law_error(&f, 0.37 * scale, -0.81 * scale, &p));
                }
            }
        }
    }
    v.check(rt < 1e-12, format!("round trip max rel error {rt:.2e}"));
    v.check(
        pars < 1e-12 && fields >= 100,
        format!("Parseval max rel error {pars:.2e} over {fields} fields"),
    );
    v.check(part < 1e-12, format!("smooth partition of unity max defect {part:.2e}"));
    v.check(tiling == 0, format!("sharp shells tile the lattice ({tiling} defects)"));
    v.check(
        group < 1e-12,
        format!("group law max rel error {group:.2e} (phases up to 1e3 rad)"),
    );
    v.within(t0.elapsed(), 120.0);
    Ok(())
}

fn c2_identities(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    let mut r = rng(42);
    for a in [1.0, 1.5, 2.0] {
        let mut worst: BTreeMap<String, f64> = BTreeMap::new();
        for (fam, n) in gradient_cases() {
            let p = DispersionParams::new(fam, a, n).map_err(|e| e.to_string())?;
            let e = (0..1000)
                .map(|_| gradient_fd_error(&p, &random_frequency(&mut r, n)))
                .fold(0.0, f64::max);
            worst.insert(format!("{fam:?}/n={n}"), e);
        }
        let max = worst.values().cloned().fold(0.0, f64::max);
        v.check(
            max < 1e-6,
            format!(
                "a={a} gradient vs finite differences, worst {max:.2e} ({})",
                worst
                    .iter()
                    .map(|(k, e)| format!("{k} {e:.1e}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        );
        let mut coc = 0.0f64;
        for fam in [Family::Isotropic, Family::MultiDirectional, Family::RibaudVento] {
            let p = DispersionParams::new(fam, a, 2).map_err(|e| e.to_string())?;
            for _ in 0..1000 {
                let (x1, x2, x3) = (
                    random_frequency(&mut r, 2),
                    random_frequency(&mut r, 2),
                    random_frequency(&mut r, 2),
                );
                coc = coc.max(cocycle_error(&p, &x1, &x2, &x3));
            }
        }
        v.check(
            coc < 1e-9,
            format!("a={a} resonance cocycle worst rel defect {coc:.2e}"),
        );
    }
    let p = DispersionParams::isotropic(2.0, 2).map_err(|e| e.to_string())?;
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    let mut compare = |k1: [i64; 2], k2: [i64; 2]| {
        let exact = resonance_exact(&p, &k1, &k2).expect("cubic");
        let via_float = resonance(&p, &[k1[0] as f64, k1[1] as f64], &[k2[0] as f64, k2[1] as f64]);
        if exact != zk_resonance_expanded(k1, k2) || via_float != exact as f64 {
            mismatches += 1;
        }
        checked += 1;
    };
    for x1 in -6..=6 {
        for y1 in -6..=6 {
            for x2 in -6..=6 {
                for y2 in -6..=6 {
                    compare([x1, y1], [x2, y2]);
                }
            }
        }
    }
    for _ in 0..100_000 {
        let k: [i64; 4] = std::array::from_fn(|_| r.random_range(-1_000_000..=1_000_000));
        compare([k[0], k[1]], [k[2], k[3]]);
    }
    v.check(
        mismatches == 0,
        format!("expanded cubic resonance exact on {checked} integer pairs"),
    );
    v.within(t0.elapsed(), 60.0);
    Ok(())
}

fn c3_transversality(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    let exhaustive = TransversalityOptions {
        enumeration: Enumeration::Exhaustive,
        ..TransversalityOptions::default()
    };
    for a in [1.0, 1.5, 2.0] {
        let p = DispersionParams::isotropic(a, 2).map_err(|e| e.to_string())?;
        let mut line = Vec::new();
        let mut ok = true;
        for n in [8, 16, 32] {
            let r = min_transversality_with(n, &p, Constraint::HighHighHigh, &exhaustive).map_err(|e| e.to_string())?;
            ok &= r.c_min > 0.0 && !r.sampled && r.revalidate().is_ok();
            line.push(format!("N={n}: {:.4} ({} triples)", r.c_min, r.triples_scanned));
        }
        v.check(ok, format!("high-high-high a={a} exhaustive c_min {}", line.join(", ")));
    }
    for a in [1.0, 1.5, 2.0] {
        let p = DispersionParams::isotropic(a, 2).map_err(|e| e.to_string())?;
        let mut line = Vec::new();
        let mut ok = true;
        for (n, k) in [(16, 2), (32, 4), (64, 8), (64, 4)] {
            let r = min_transversality(n, &p, Constraint::SeparatedHighLow { low: k }).map_err(|e| e.to_string())?;
            ok &= r.c_min > 0.0 && r.revalidate().is_ok();
            line.push(format!("N/K={n}/{k}: {:.4}", r.c_min));
        }
        v.check(ok, format!("separated high-low a={a} c_min {}", line.join(", ")));
    }
    let p3 = DispersionParams::isotropic(2.0, 3).map_err(|e| e.to_string())?;
    for k in [4u32, 5] {
        let r = min_transversality(1 << k, &p3, Constraint::ZkSmallFirstComponent).map_err(|e| e.to_string())?;
        let ok = r.c_min > 0.0 && r.revalidate().is_ok();
        v.check(
            ok,
            format!(
                "small first component n=3 k={k} c_min {:.4} witness {:?}{}",
                r.c_min,
                r.witness.xi,
                if r.sampled { " (sampled)" } else { "" }
            ),
        );
    }
    v.within(t0.elapsed(), 600.0);
    Ok(())
}

fn c4_kernel(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    let ts: Vec<f64> = (1..=64).map(f64::from).collect();
    for a in [1.0, 2.0] {
        let p = DispersionParams::isotropic(a, 3).map_err(|e| e.to_string())?;
        let r =
            kernel_decay_scan(&p, &ts, &XSampler::default(), &RadialProfile::annular()).map_err(|e| e.to_string())?;
        v.check(
            r.growth <= 4.0,
            format!(
                "a={a} max_t |t|·sup|I| / (t=1 value) = {:.4} (C_emp {:.4})",
                r.growth, r.c_emp
            ),
        );
        v.check(
            r.max_refinement_change < 1e-6,
            format!("a={a} quadrature refinement change {:.2e}", r.max_refinement_change),
        );
    }
    v.within(t0.elapsed(), 300.0);
    Ok(())
}

type Experiment = fn(&EstimateProbe) -> fzk::Result<RatioReport>;

fn ratio_sweep(v: &mut Verdict, run: Experiment, a: f64, k: u32) -> Result<bool, String> {
    let grid = SpectralGrid::new(2, 256, 2.0 * PI).map_err(|e| e.to_string())?;
    let params = DispersionParams::isotropic(a, 2).map_err(|e| e.to_string())?;
    let mut maxima = Vec::new();
    for n in [16, 32, 64] {
        let probe = EstimateProbe::new(params, grid.clone(), ProbeShells::Pair { high: n, low: k })
            .map_err(|e| e.to_string())?
            .with_trials(50)
            .with_seed(2024);
        match run(&probe) {
            Ok(r) => maxima.push(r.ratio),
            Err(e) => {
                v.check(false, format!("a={a} K={k} N={n} not computable: {e}"));
                return Ok(false);
            }
        }
    }
    let sp = spread(&maxima);
    v.check(sp < 2.0, format!("a={a} K={k} max ratios {maxima:.4?} spread {sp:.3}"));
    Ok(sp < 2.0)
}

fn c5_bilinear(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    for a in [1.0, 1.5, 2.0] {
        for k in [1, 2] {
            ratio_sweep(v, bilinear_ratio, a, k)?;
        }
    }
    v.within(t0.elapsed(), 600.0);
    Ok(())
}

fn c6_shorttime(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    for a in [1.0, 1.5, 2.0] {
        for k in [1, 2] {
            ratio_sweep(v, shorttime_amelioration, a, k)?;
        }
    }
    v.within(t0.elapsed(), 600.0);
    Ok(())
}

/// What the known failure of criterion 6 must look like: `a = 1` is uniform
/// and every `a > 1` case is refused by the wrap-around guard.
fn c6_failure_is_as_documented() -> bool {
    let grid = SpectralGrid::new(2, 256, 2.0 * PI).unwrap();
    [1.5, 2.0].iter().all(|&a| {
        let params = DispersionParams::isotropic(a, 2).unwrap();
        [16, 32, 64].iter().all(|&n| {
            let probe = EstimateProbe::new(params, grid.clone(), ProbeShells::Pair { high: n, low: 1 })
                .unwrap()
                .with_trials(1);
            matches!(shorttime_amelioration(&probe), Err(fzk::Error::TimeHorizon(_)))
        })
    })
}

fn c7_conservation(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    let period = 8.0 * PI;
    for a in [1.0, 1.5, 2.0] {
        let p = DispersionParams::with_period(Family::Isotropic, a, 2, period).map_err(|e| e.to_string())?;
        let g = SpectralGrid::new(2, 128, period).map_err(|e| e.to_string())?;
        let cfg = SolverConfig::at_phase_bound(p, g.clone(), 1.0)
            .map_err(|e| e.to_string())?
            .with_diag_every(50);
        let u0 = normalize_sobolev(&random_datum(&g, 3.0, Some(cfg.retained_wavenumber()), 1), 3.0);
        let traj = solve(&u0, &cfg).map_err(|e| e.to_string())?;
        let (dm, de) = (traj.mass_drift(), traj.energy_drift().unwrap_or(f64::INFINITY));
        v.check(
            dm < 1e-8 && de < 1e-6,
            format!("a={a} T=1 dt={:.2e} mass drift {dm:.2e}, energy drift {de:.2e}", cfg.dt),
        );
        // the order is read off an amplified datum; at unit size every
        // level already agrees to roundoff
        let short = SolverConfig {
            horizon: 0.05,
            ..cfg.clone()
        };
        let conv = self_convergence(&u0.scale(1000.0), &short, 3, 16.0).map_err(|e| e.to_string())?;
        let ok = conv.orders.iter().all(|o| (o - 4.0).abs() <= 0.3);
        v.check(
            ok,
            format!("a={a} IF-RK4 orders {:.3?} (errors {})", conv.orders, sci(&conv.errors)),
        );
    }
    v.within(t0.elapsed(), 300.0);
    Ok(())
}

fn c8_bona_smith(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    let s = 2.0;
    let p = DispersionParams::isotropic(1.0, 2).map_err(|e| e.to_string())?;
    let g = SpectralGrid::new(2, 128, 2.0 * PI).map_err(|e| e.to_string())?;
    let cfg = SolverConfig::at_phase_bound(p, g.clone(), 1.0)
        .map_err(|e| e.to_string())?
        .with_diag_every(25);
    let u0 = normalize_sobolev(&random_datum(&g, s + 2.0, Some(cfg.retained_wavenumber()), 3), s);
    let table = bona_smith(&u0, s, &[4, 8, 16, 32], &cfg).map_err(|e| e.to_string())?;
    let l2: Vec<f64> = table.rows.iter().map(|r| r.sup_l2).collect();
    let hs: Vec<f64> = table.rows.iter().map(|r| r.sup_hs).collect();
    v.check(
        table.nonincreasing(false, 0.0),
        format!("a=1 T=1 sup L2 column {} nonincreasing", sci(&l2)),
    );
    v.check(
        table.nonincreasing(true, 0.0),
        format!("sup H^2 column {} nonincreasing", sci(&hs)),
    );
    let decay = table.decay_factors(false);
    v.check(
        decay.iter().all(|&d| d >= 4.0),
        format!("L2 decay per doubling {decay:.2?}"),
    );
    v.within(t0.elapsed(), 600.0);
    Ok(())
}

/// Compares two CSV files cell by cell: integers and text exactly, floats to
/// `1e-12` relative.
fn compare_csv(a: &Path, b: &Path) -> Result<(), String> {
    let (ta, tb) = (
        std::fs::read_to_string(a).map_err(|e| e.to_string())?,
        std::fs::read_to_string(b).map_err(|e| e.to_string())?,
    );
    let (la, lb): (Vec<&str>, Vec<&str>) = (ta.lines().collect(), tb.lines().collect());
    if la.len() != lb.len() {
        return Err(format!("{}: {} vs {} lines", a.display(), la.len(), lb.len()));
    }
    for (row, (ra, rb)) in la.iter().zip(&lb).enumerate() {
        let (ca, cb): (Vec<&str>, Vec<&str>) = (ra.split(',').collect(), rb.split(',').collect());
        if ca.len() != cb.len() {
            return Err(format!("{} row {row}: column count differs", a.display()));
        }
        for (x, y) in ca.iter().zip(&cb) {
            let same = match (x.parse::<i64>(), y.parse::<i64>(), x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(i), Ok(j), _, _) => i == j,
                (_, _, Ok(p), Ok(q)) => p == q || (p - q).abs() <= 1e-12 * p.abs().max(q.abs()),
                _ => x == y,
            };
            if !same {
                return Err(format!("{} row {row}: {x} vs {y}", a.display()));
            }
        }
    }
    Ok(())
}

fn csv_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for e in std::fs::read_dir(dir).into_iter().flatten().flatten() {
        let p = e.path();
        if p.is_dir() {
            csv_files(&p, out);
        } else if p.extension().is_some_and(|x| x == "csv") {
            out.push(p);
        }
    }
}

fn c9_determinism(v: &mut Verdict) -> Result<(), String> {
    let t0 = Instant::now();
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut names: Vec<PathBuf> = std::fs::read_dir(&configs)
        .map_err(|e| e.to_string())?
        .flatten()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    names.sort();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    for cfg in &names {
        let stem = cfg.file_stem().unwrap().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(cfg).map_err(|e| e.to_string())?;
        let mut digests = Vec::new();
        let mut dirs = Vec::new();
        for run in 0..2 {
            let out = tmp.path().join(format!("{stem}_{run}"));
            let opts = RunOptions {
                kind: None,
                seed: None,
                out_dir: Some(out.clone()),
            };
            let outcome = run_toml(&text, &opts).map_err(|e| format!("{stem}: {e}"))?;
            digests.push(outcome.manifest.files.clone());
            dirs.push(out);
        }
        let mut files = Vec::new();
        csv_files(&dirs[0], &mut files);
        let mut result = Ok(());
        for f in &files {
            let twin = dirs[1].join(f.strip_prefix(&dirs[0]).unwrap());
            if let Err(e) = compare_csv(f, &twin) {
                result = Err(e);
                break;
            }
        }
        let identical = digests[0] == digests[1];
        v.check(
            result.is_ok() && !files.is_empty(),
            format!(
                "{stem}: {} CSV files agree{}{}",
                files.len(),
                if identical { ", all artifacts bit-identical" } else { "" },
                result.err().map(|e| format!(" ({e})")).unwrap_or_default()
            ),
        );
    }
    // a full-size probe from criterion 5 re-run with the same seed
    let grid = SpectralGrid::new(2, 256, 2.0 * PI).map_err(|e| e.to_string())?;
    let params = DispersionParams::isotropic(1.5, 2).map_err(|e| e.to_string())?;
    let probe = EstimateProbe::new(params, grid, ProbeShells::Pair { high: 32, low: 2 })
        .map_err(|e| e.to_string())?
        .with_trials(10)
        .with_seed(2024);
    let r1 = bilinear_ratio(&probe).map_err(|e| e.to_string())?;
    let r2 = bilinear_ratio(&probe).map_err(|e| e.to_string())?;
    let same = r1
        .trials
        .iter()
        .zip(&r2.trials)
        .all(|(x, y)| x.ratio == y.ratio && x.seed == y.seed);
    v.check(
        same,
        format!(
            "bilinear probe a=1.5 N=32 K=2 trial ratios reproduce (max {:.6})",
            r1.ratio
        ),
    );
    v.within(t0.elapsed(), 600.0);
    Ok(())
}

fn main() -> ExitCode {
    let only: Option<Vec<u32>> = std::env::var("FZK_CRITERIA")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [(u32, &str, Criterion); 9] = [
        (1, "spectral substrate", c1_spectral),
        (2, "gradient and resonance identities", c2_identities),
        (3, "transversality certification", c3_transversality),
        (4, "kernel decay", c4_kernel),
        (5, "bilinear ratio", c5_bilinear),
        (6, "shorttime amelioration", c6_shorttime),
        (7, "conservation and order", c7_conservation),
        (8, "truncated-data continuity", c8_bona_smith),
        (9, "determinism", c9_determinism),
    ];
    let mut unexpected = Vec::new();
    let mut summary = Vec::new();
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t0 = Instant::now();
        let mut v = Verdict::new();
        match catch_unwind(AssertUnwindSafe(|| run(&mut v))) {
            Ok(Ok(())) => {}
            Ok(Err(e)) => v.check(false, format!("error: {e}")),
            Err(_) => v.check(false, "panicked".into()),
        }
        for d in &v.details {
            println!("    [{id}] {d}");
        }
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let mut tag = String::new();
        if known && !v.pass {
            if id == 6 && !c6_failure_is_as_documented() {
                unexpected.push(id);
                tag = " (known failure, but not in the documented form)".into();
            } else {
                tag = " (known: horizon N^(a-2) exceeds the wrap-around time on the grid for a > 1)".into();
            }
        } else if !v.pass {
            unexpected.push(id);
        }
        let line = format!(
            "criterion {id} [{name}]: {} ({:.1} s){tag}",
            if v.pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64()
        );
        println!("{line}");
        summary.push(line);
    }
    println!("\nsummary");
    for line in &summary {
        println!("  {line}");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
