//! Lower bounds on group-velocity gaps over frequency triples.
//!
//! For a triple `ξ₁ + ξ₂ + ξ₃ = 0` drawn from the constraint's regions the gap
//! is `max_{i<j} |∇φ(ξᵢ) − ∇φ(ξⱼ)|`; the report holds its minimum, divided by
//! the constraint's natural scale.
//!
//! When all three frequencies share one region the exact minimum is found by
//! a radius-doubling search: points are bucketed by gradient on a grid of
//! cell size `r`, and only pairs whose gradients lie within `r` are expanded.
//! The first radius that yields any triple yields the minimum, since every
//! triple of gap `≤ r` is visited. Mixed regions are scanned pairwise over the
//! two smallest regions.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::velocity::group_velocity;
use crate::error::{Error, Result};
use crate::spectral::{DispersionParams, Family};

const MAX_DIM: usize = 4;
const MAX_TABLE: usize = 1 << 25;

/// Which frequency configuration is scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    /// Every `|ξᵢ| ∈ [N/8, 8N]`.
    HighHighHigh,
    /// `|ξ₁| ∈ [N/2, 2N)`, `|ξ₂| ∈ [K/2, 2K)`, `ξ₃` free; needs `K ≤ N/8`.
    SeparatedHighLow { low: u32 },
    /// Cubic isotropic case, `n ≥ 3`, `N = 2^k`: every `|ξᵢ| ∈ [N/2, 2N)` and
    /// `1 ≤ |ξᵢ₁| ≤ N/8`.
    #[serde(rename = "ZK_nD_SmallFirstComponent")]
    ZkSmallFirstComponent,
    /// `|ξᵢ| ∈ [Nᵢ/2, 2Nᵢ)` for the listed dyadic labels.
    Shells([u32; 3]),
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::HighHighHigh => f.write_str("HighHighHigh"),
            Constraint::SeparatedHighLow { .. } => f.write_str("SeparatedHighLow"),
            Constraint::ZkSmallFirstComponent => f.write_str("ZK_nD_SmallFirstComponent"),
            Constraint::Shells(_) => f.write_str("Shells"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Enumeration {
    /// Exhaustive within the budgets, sampled above them.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransversalityOptions {
    pub enumeration: Enumeration,
    pub seed: u64,
    /// Admissible triples drawn in sampled mode.
    pub samples: usize,
    /// Largest region (in lattice points) searched exhaustively.
    pub point_budget: usize,
    /// Largest pair count scanned exhaustively for mixed regions.
    pub pair_budget: u64,
}

impl Default for TransversalityOptions {
    fn default() -> Self {
        TransversalityOptions {
            enumeration: Enumeration::Auto,
            seed: 0,
            samples: 1_000_000,
            point_budget: 250_000,
            pair_budget: 200_000_000,
        }
    }
}

/// Lattice triple summing to zero, with the dyadic label of each slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTriple {
    pub xi: [Vec<i64>; 3],
    pub shells: [u32; 3],
}

impl FrequencyTriple {
    pub fn sums_to_zero(&self) -> bool {
        (0..self.xi[0].len()).all(|d| self.xi[0][d] + self.xi[1][d] + self.xi[2][d] == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalityReport {
    #[serde(rename = "N")]
    pub n_dyadic: u32,
    pub params: DispersionParams,
    pub constraint: Constraint,
    /// Minimum gap divided by `normalization`.
    pub c_min: f64,
    /// Minimum gap itself.
    pub gap: f64,
    pub normalization: f64,
    pub witness: FrequencyTriple,
    /// Ordered admissible triples examined (all of them when exhaustive).
    pub triples_scanned: u64,
    pub sampled: bool,
    pub seed: u64,
}

impl TransversalityReport {
    /// Flat JSON record: `{N, a, n, family, constraint, c_min, witness, triples_scanned, sampled, seed, …}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "N": self.n_dyadic,
            "a": self.params.a,
            "n": self.params.n,
            "family": self.params.family.to_string(),
            "constraint": self.constraint.to_string(),
            "c_min": self.c_min,
            "gap": self.gap,
            "normalization": self.normalization,
            "witness": self.witness.xi,
            "shells": self.witness.shells,
            "triples_scanned": self.triples_scanned,
            "sampled": self.sampled,
            "seed": self.seed,
        });
        if let Constraint::SeparatedHighLow { low } = self.constraint {
            v["K"] = low.into();
        }
        v
    }

    /// Re-checks the witness against the constraint and recomputes `c_min`.
    pub fn revalidate(&self) -> Result<()> {
        let setup = Setup::new(self.n_dyadic, &self.params, self.constraint)?;
        let w = &self.witness;
        if !w.sums_to_zero() {
            return Err(Error::NotAdmissible("witness does not sum to zero".into()));
        }
        for (slot, k) in w.xi.iter().enumerate() {
            let in_slot = setup.regions[slot].contains(k, setup.unit);
            // same-region witnesses are stored sorted, so any slot will do
            if !in_slot {
                return Err(Error::NotAdmissible(format!("witness entry {slot} outside its region")));
            }
        }
        let g: Vec<Vec<f64>> =
            w.xi.iter()
                .map(|k| group_velocity(&self.params, &setup.physical(k)))
                .collect::<Result<_>>()?;
        let d2 = triple_gap2(&g[0], &g[1], &g[2]);
        let c = d2.sqrt() / setup.normalization;
        if c != self.c_min {
            return Err(Error::NotAdmissible(format!(
                "witness gap {c} does not reproduce c_min {}",
                self.c_min
            )));
        }
        Ok(())
    }
}

/// Admissible set for one slot of the triple.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Region {
    lo2: f64,
    hi2: f64,
    hi_closed: bool,
    /// `1 ≤ |k₁| ≤ first_max`.
    first_max: Option<i64>,
    all: bool,
}

impl Region {
    fn annulus(lo: f64, hi: f64, hi_closed: bool) -> Self {
        Region {
            lo2: lo * lo,
            hi2: hi * hi,
            hi_closed,
            first_max: None,
            all: false,
        }
    }

    fn everything() -> Self {
        Region {
            lo2: 0.0,
            hi2: f64::INFINITY,
            hi_closed: true,
            first_max: None,
            all: true,
        }
    }

    fn contains(&self, k: &[i64], unit: f64) -> bool {
        if self.all {
            return true;
        }
        if let Some(fm) = self.first_max {
            let f = k[0].abs();
            if f < 1 || f > fm {
                return false;
            }
        }
        let r2 = unit * unit * k.iter().map(|&v| (v * v) as f64).sum::<f64>();
        r2 >= self.lo2 && (r2 < self.hi2 || (self.hi_closed && r2 == self.hi2))
    }

    /// Per-axis coordinate bound `|k_d| ≤ b_d`.
    fn bounds(&self, n: usize, unit: f64) -> Vec<i64> {
        let b = (self.hi2.sqrt() / unit).floor() as i64 + 1;
        (0..n)
            .map(|d| match (d, self.first_max) {
                (0, Some(fm)) => fm.min(b),
                _ => b,
            })
            .collect()
    }

    fn box_size(&self, n: usize, unit: f64) -> f64 {
        if self.all {
            return f64::INFINITY;
        }
        self.bounds(n, unit).iter().map(|&b| (2 * b + 1) as f64).product()
    }

    /// Lattice points in lexicographic order, flattened with stride `n`.
    fn enumerate(&self, n: usize, unit: f64) -> Vec<i64> {
        let b = self.bounds(n, unit);
        let mut out = Vec::new();
        let mut k: Vec<i64> = b.iter().map(|&v| -v).collect();
        loop {
            if self.contains(&k, unit) {
                out.extend_from_slice(&k);
            }
            let mut d = n;
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                if k[d] < b[d] {
                    k[d] += 1;
                    break;
                }
                k[d] = -b[d];
            }
        }
    }

    fn sample(&self, n: usize, unit: f64, rng: &mut ChaCha8Rng) -> Vec<i64> {
        let b = self.bounds(n, unit);
        loop {
            let k: Vec<i64> = b.iter().map(|&v| rng.random_range(-v..=v)).collect();
            if self.contains(&k, unit) {
                return k;
            }
        }
    }
}

struct Setup {
    regions: [Region; 3],
    shells: [u32; 3],
    normalization: f64,
    unit: f64,
}

impl Setup {
    fn new(n_dyadic: u32, params: &DispersionParams, constraint: Constraint) -> Result<Self> {
        params.validate()?;
        if params.n > MAX_DIM {
            return Err(Error::InvalidParams(format!(
                "transversality scans support n <= {MAX_DIM} (got {})",
                params.n
            )));
        }
        check_dyadic(n_dyadic)?;
        let nn = n_dyadic as f64;
        let a = params.a;
        let unit = params.frequency_unit();
        let setup = match constraint {
            Constraint::HighHighHigh => {
                let r = Region::annulus(nn / 8.0, 8.0 * nn, true);
                Setup {
                    regions: [r; 3],
                    shells: [n_dyadic; 3],
                    normalization: nn.powf(a),
                    unit,
                }
            }
            Constraint::SeparatedHighLow { low } => {
                check_dyadic(low)?;
                if 8 * low as u64 > n_dyadic as u64 {
                    return Err(Error::ShellsNotSeparated { high: n_dyadic, low });
                }
                let kk = low as f64;
                Setup {
                    regions: [
                        Region::annulus(nn / 2.0, 2.0 * nn, false),
                        Region::annulus(kk / 2.0, 2.0 * kk, false),
                        Region::everything(),
                    ],
                    shells: [n_dyadic, low, n_dyadic],
                    normalization: (nn / 2.0).powf(a),
                    unit,
                }
            }
            Constraint::ZkSmallFirstComponent => {
                if params.family != Family::Isotropic || !params.is_cubic() || params.n < 3 {
                    return Err(Error::InvalidParams(
                        "small-first-component scan needs the isotropic family, a = 2, n >= 3".into(),
                    ));
                }
                let mut r = Region::annulus(nn / 2.0, 2.0 * nn, false);
                r.first_max = Some((n_dyadic / 8) as i64);
                Setup {
                    regions: [r; 3],
                    shells: [n_dyadic; 3],
                    normalization: nn,
                    unit,
                }
            }
            Constraint::Shells(s) => {
                for &v in &s {
                    check_dyadic(v)?;
                }
                let top = *s.iter().max().expect("three shells") as f64;
                Setup {
                    regions: s.map(|v| Region::annulus(v as f64 / 2.0, 2.0 * v as f64, false)),
                    shells: s,
                    normalization: top.powf(a),
                    unit,
                }
            }
        };
        Ok(setup)
    }

    fn physical(&self, k: &[i64]) -> Vec<f64> {
        k.iter().map(|&v| v as f64 * self.unit).collect()
    }

    /// True when the radii alone rule out `ξ₁ + ξ₂ + ξ₃ = 0`.
    fn triangle_infeasible(&self) -> bool {
        let lo: Vec<f64> = self.regions.iter().map(|r| r.lo2.sqrt()).collect();
        let hi: Vec<f64> = self.regions.iter().map(|r| r.hi2.sqrt()).collect();
        (0..3).any(|i| lo[i] > 0.0 && lo[i] >= hi[(i + 1) % 3] + hi[(i + 2) % 3])
    }

    fn same_region(&self) -> bool {
        self.regions[0] == self.regions[1] && self.regions[1] == self.regions[2]
    }
}

fn check_dyadic(n: u32) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidParams(format!("{n} is not a dyadic integer")));
    }
    Ok(())
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn triple_gap2(g1: &[f64], g2: &[f64], g3: &[f64]) -> f64 {
    dist2(g1, g2).max(dist2(g1, g3)).max(dist2(g2, g3))
}

/// Minimum normalized group-velocity gap for `constraint` at dyadic scale `n_dyadic`.
pub fn min_transversality(
    n_dyadic: u32,
    params: &DispersionParams,
    constraint: Constraint,
) -> Result<TransversalityReport> {
    min_transversality_with(n_dyadic, params, constraint, &TransversalityOptions::default())
}

pub fn min_transversality_with(
    n_dyadic: u32,
    params: &DispersionParams,
    constraint: Constraint,
    opts: &TransversalityOptions,
) -> Result<TransversalityReport> {
    let setup = Setup::new(n_dyadic, params, constraint)?;
    if setup.triangle_infeasible() {
        return Err(Error::NoAdmissibleTriples);
    }
    let n = params.n;
    let unit = setup.unit;
    let outcome = if setup.same_region() {
        let region = setup.regions[0];
        let feasible = region.box_size(n, unit) <= MAX_TABLE as f64;
        let pts = if feasible && opts.enumeration != Enumeration::Sampled {
            Some(region.enumerate(n, unit))
        } else {
            None
        };
        match pts {
            Some(p) if opts.enumeration == Enumeration::Exhaustive || p.len() / n <= opts.point_budget => {
                exhaustive_same(params, &setup, p)?
            }
            _ => sampled(params, &setup, opts)?,
        }
    } else {
        let order = pair_order(&setup, n);
        let (ra, rb) = (setup.regions[order[0]], setup.regions[order[1]]);
        let pairs = ra.box_size(n, unit) * rb.box_size(n, unit);
        let exhaustive = match opts.enumeration {
            Enumeration::Sampled => false,
            Enumeration::Exhaustive => true,
            Enumeration::Auto => pairs <= 4.0 * opts.pair_budget as f64,
        };
        if exhaustive {
            exhaustive_pairs(params, &setup, order)?
        } else {
            sampled(params, &setup, opts)?
        }
    };
    let Outcome {
        d2,
        witness,
        scanned,
        sampled,
    } = outcome;
    let gap = d2.sqrt();
    Ok(TransversalityReport {
        n_dyadic,
        params: *params,
        constraint,
        c_min: gap / setup.normalization,
        gap,
        normalization: setup.normalization,
        witness: FrequencyTriple {
            xi: witness,
            shells: setup.shells,
        },
        triples_scanned: scanned,
        sampled,
        seed: opts.seed,
    })
}

struct Outcome {
    d2: f64,
    witness: [Vec<i64>; 3],
    scanned: u64,
    sampled: bool,
}

/// Slot order `[a, b, c]`: `a` and `b` are enumerated, `c` is derived.
fn pair_order(setup: &Setup, n: usize) -> [usize; 3] {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| {
        let si = setup.regions[i].box_size(n, setup.unit);
        let sj = setup.regions[j].box_size(n, setup.unit);
        si.partial_cmp(&sj).expect("finite sizes").then(i.cmp(&j))
    });
    idx
}

/// Dense point lookup over the bounding box of an enumerated region.
struct Lookup {
    bounds: Vec<i64>,
    table: Vec<u32>,
}

impl Lookup {
    fn new(pts: &[i64], n: usize, bounds: Vec<i64>) -> Self {
        let size: usize = bounds.iter().map(|&b| (2 * b + 1) as usize).product();
        let mut table = vec![u32::MAX; size];
        let mut lk = Lookup {
            bounds,
            table: Vec::new(),
        };
        for (i, k) in pts.chunks_exact(n).enumerate() {
            let slot = lk.slot(k).expect("point inside its own box");
            table[slot] = i as u32;
        }
        lk.table = table;
        lk
    }

    fn slot(&self, k: &[i64]) -> Option<usize> {
        let mut s = 0usize;
        for (&v, &b) in k.iter().zip(&self.bounds) {
            if v.abs() > b {
                return None;
            }
            s = s * (2 * b + 1) as usize + (v + b) as usize;
        }
        Some(s)
    }

    fn get(&self, k: &[i64]) -> Option<u32> {
        self.slot(k).map(|s| self.table[s]).filter(|&i| i != u32::MAX)
    }
}

fn gradients(params: &DispersionParams, setup: &Setup, pts: &[i64]) -> Result<Vec<f64>> {
    let n = params.n;
    let mut g = Vec::with_capacity(pts.len());
    for k in pts.chunks_exact(n) {
        g.extend(group_velocity(params, &setup.physical(k))?);
    }
    Ok(g)
}

/// Ordered pairs `(ξ₁, ξ₂) ∈ R²` with `−ξ₁−ξ₂ ∈ R`, counted by FFT autocorrelation.
fn count_same_region(pts: &[i64], n: usize, lookup: &Lookup) -> u64 {
    use num_complex::Complex64;
    let shape: Vec<usize> = lookup.bounds.iter().map(|&b| (4 * b + 1) as usize).collect();
    let total: usize = shape.iter().product();
    let wrap = |k: &[i64]| -> usize {
        k.iter()
            .zip(&shape)
            .fold(0usize, |acc, (&v, &m)| acc * m + v.rem_euclid(m as i64) as usize)
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); total];
    for k in pts.chunks_exact(n) {
        buf[wrap(k)] = Complex64::new(1.0, 0.0);
    }
    crate::spectral::grid::fft_nd(&mut buf, &shape, false);
    for v in buf.iter_mut() {
        *v = *v * *v;
    }
    crate::spectral::grid::fft_nd(&mut buf, &shape, true);
    let scale = 1.0 / total as f64;
    let mut neg = vec![0i64; n];
    pts.chunks_exact(n)
        .map(|k| {
            for (d, v) in k.iter().enumerate() {
                neg[d] = -v;
            }
            (buf[wrap(&neg)].re * scale).round() as u64
        })
        .sum()
}

type Best = (f64, u32, u32, u32);

fn better(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => {
            let ord =
                x.0.partial_cmp(&y.0)
                    .expect("finite gaps")
                    .then((x.1, x.2, x.3).cmp(&(y.1, y.2, y.3)));
            Some(if ord.is_le() { x } else { y })
        }
        (x, None) => x,
        (None, y) => y,
    }
}

fn exhaustive_same(params: &DispersionParams, setup: &Setup, pts: Vec<i64>) -> Result<Outcome> {
    let n = params.n;
    let np = pts.len() / n;
    if np == 0 {
        return Err(Error::NoAdmissibleTriples);
    }
    let lookup = Lookup::new(&pts, n, setup.regions[0].bounds(n, setup.unit));
    let scanned = count_same_region(&pts, n, &lookup);
    if scanned == 0 {
        return Err(Error::NoAdmissibleTriples);
    }
    let grads = gradients(params, setup, &pts)?;
    let g = |i: usize| &grads[i * n..(i + 1) * n];

    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for i in 0..np {
        for d in 0..n {
            lo[d] = lo[d].min(g(i)[d]);
            hi[d] = hi[d].max(g(i)[d]);
        }
    }
    let diam2: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum();
    let mut r = (diam2.sqrt() * 2f64.powi(-16)).max(f64::MIN_POSITIVE);

    let offsets: Vec<[i64; MAX_DIM]> = {
        let mut v = vec![[0i64; MAX_DIM]];
        for d in 0..n {
            v = v
                .into_iter()
                .flat_map(|o| {
                    [-1i64, 0, 1].map(|s| {
                        let mut o2 = o;
                        o2[d] = s;
                        o2
                    })
                })
                .collect();
        }
        v
    };

    loop {
        let r2 = r * r;
        let cell = |x: &[f64]| {
            let mut c = [0i64; MAX_DIM];
            for d in 0..n {
                c[d] = (x[d] / r).floor() as i64;
            }
            c
        };
        let mut buckets: HashMap<[i64; MAX_DIM], Vec<u32>> = HashMap::new();
        for i in 0..np {
            buckets.entry(cell(g(i))).or_default().push(i as u32);
        }
        let best = (0..np)
            .into_par_iter()
            .map(|i| {
                let gi = g(i);
                let ki = &pts[i * n..(i + 1) * n];
                let ci = cell(gi);
                let mut k3 = vec![0i64; n];
                let mut local: Option<Best> = None;
                for off in &offsets {
                    let mut c = ci;
                    for d in 0..n {
                        c[d] += off[d];
                    }
                    let Some(list) = buckets.get(&c) else { continue };
                    for &j in list {
                        let j = j as usize;
                        if j < i {
                            continue;
                        }
                        let d12 = dist2(gi, g(j));
                        if d12 > r2 {
                            continue;
                        }
                        let kj = &pts[j * n..(j + 1) * n];
                        for d in 0..n {
                            k3[d] = -ki[d] - kj[d];
                        }
                        let Some(l) = lookup.get(&k3) else { continue };
                        let l = l as usize;
                        if l < j {
                            continue;
                        }
                        let m = d12.max(dist2(gi, g(l))).max(dist2(g(j), g(l)));
                        if m <= r2 {
                            local = better(local, Some((m, i as u32, j as u32, l as u32)));
                        }
                    }
                }
                local
            })
            .reduce(|| None, better);
        if let Some((d2, i, j, l)) = best {
            let at = |q: u32| pts[q as usize * n..(q as usize + 1) * n].to_vec();
            return Ok(Outcome {
                d2,
                witness: [at(i), at(j), at(l)],
                scanned,
                sampled: false,
            });
        }
        if r2 > 4.0 * diam2 {
            return Err(Error::NoAdmissibleTriples);
        }
        r *= 2.0;
    }
}

fn exhaustive_pairs(params: &DispersionParams, setup: &Setup, order: [usize; 3]) -> Result<Outcome> {
    let n = params.n;
    let unit = setup.unit;
    let [sa, sb, sc] = order;
    let pa = setup.regions[sa].enumerate(n, unit);
    let pb = setup.regions[sb].enumerate(n, unit);
    let ga = gradients(params, setup, &pa)?;
    let gb = gradients(params, setup, &pb)?;
    let (na, nb) = (pa.len() / n, pb.len() / n);
    let rc = setup.regions[sc];

    let per_a: Vec<Result<(u64, Option<Best>)>> = (0..na)
        .into_par_iter()
        .map(|i| {
            let ki = &pa[i * n..(i + 1) * n];
            let gi = &ga[i * n..(i + 1) * n];
            let mut count = 0u64;
            let mut local: Option<Best> = None;
            let mut k3 = vec![0i64; n];
            for j in 0..nb {
                let kj = &pb[j * n..(j + 1) * n];
                for d in 0..n {
                    k3[d] = -ki[d] - kj[d];
                }
                if !rc.contains(&k3, unit) {
                    continue;
                }
                count += 1;
                let g3 = group_velocity(params, &setup.physical(&k3))?;
                let m = triple_gap2(gi, &gb[j * n..(j + 1) * n], &g3);
                local = better(local, Some((m, i as u32, j as u32, 0)));
            }
            Ok((count, local))
        })
        .collect();
    let mut scanned = 0u64;
    let mut best: Option<Best> = None;
    for r in per_a {
        let (c, b) = r?;
        scanned += c;
        best = better(best, b);
    }
    let Some((d2, i, j, _)) = best else {
        return Err(Error::NoAdmissibleTriples);
    };
    let ki = pa[i as usize * n..(i as usize + 1) * n].to_vec();
    let kj = pb[j as usize * n..(j as usize + 1) * n].to_vec();
    let k3: Vec<i64> = ki.iter().zip(&kj).map(|(a, b)| -a - b).collect();
    let mut witness: [Vec<i64>; 3] = Default::default();
    witness[sa] = ki;
    witness[sb] = kj;
    witness[sc] = k3;
    Ok(Outcome {
        d2,
        witness,
        scanned,
        sampled: false,
    })
}

/// Seeded Monte Carlo scan; the reported minimum is an upper bound.
fn sampled(params: &DispersionParams, setup: &Setup, opts: &TransversalityOptions) -> Result<Outcome> {
    let n = params.n;
    let unit = setup.unit;
    let [sa, sb, sc] = pair_order(setup, n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_attempts = (opts.samples as u64).saturating_mul(1000).max(1000);
    let mut accepted = 0u64;
    let mut attempts = 0u64;
    let mut best: Option<(f64, [Vec<i64>; 3])> = None;
    while accepted < opts.samples as u64 && attempts < max_attempts {
        attempts += 1;
        let ka = setup.regions[sa].sample(n, unit, &mut rng);
        let kb = setup.regions[sb].sample(n, unit, &mut rng);
        let kc: Vec<i64> = ka.iter().zip(&kb).map(|(a, b)| -a - b).collect();
        if !setup.regions[sc].contains(&kc, unit) {
            continue;
        }
        accepted += 1;
        let mut w: [Vec<i64>; 3] = Default::default();
        w[sa] = ka;
        w[sb] = kb;
        w[sc] = kc;
        if setup.same_region() {
            w.sort();
        }
        let g: Vec<Vec<f64>> = w
            .iter()
            .map(|k| group_velocity(params, &setup.physical(k)))
            .collect::<Result<_>>()?;
        let d2 = triple_gap2(&g[0], &g[1], &g[2]);
        let replace = match &best {
            None => true,
            Some((b, bw)) => d2 < *b || (d2 == *b && w < *bw),
        };
        if replace {
            best = Some((d2, w));
        }
    }
    let Some((d2, witness)) = best else {
        return Err(Error::NoAdmissibleTriples);
    };
    Ok(Outcome {
        d2,
        witness,
        scanned: accepted,
        sampled: true,
    })
}
