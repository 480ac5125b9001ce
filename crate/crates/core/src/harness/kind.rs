use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Simulate,
    VerifyBilinear,
    VerifyShorttime,
    VerifyKernel,
    VerifyLinearStrichartz,
    Transversality,
    ResonanceScan,
    BonaSmith,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Simulate,
        Kind::VerifyBilinear,
        Kind::VerifyShorttime,
        Kind::VerifyKernel,
        Kind::VerifyLinearStrichartz,
        Kind::Transversality,
        Kind::ResonanceScan,
        Kind::BonaSmith,
    ];

    /// Parses `verify-bilinear`, `VerifyBilinear`, `verify_bilinear`, …
    pub fn parse(s: &str) -> Result<Kind, String> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        Kind::ALL
            .into_iter()
            .find(|k| k.slug().replace('-', "") == key)
            .ok_or_else(|| format!("unknown experiment kind \"{s}\""))
    }

    pub fn slug(&self) -> &'static str {
        match self {
            Kind::Simulate => "simulate",
            Kind::VerifyBilinear => "verify-bilinear",
            Kind::VerifyShorttime => "verify-shorttime",
            Kind::VerifyKernel => "verify-kernel",
            Kind::VerifyLinearStrichartz => "verify-linear-strichartz",
            Kind::Transversality => "transversality",
            Kind::ResonanceScan => "resonance-scan",
            Kind::BonaSmith => "bona-smith",
        }
    }

    /// Optional config sections the kind requires and accepts.
    pub(crate) fn sections(&self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Kind::Simulate => (&["grid", "solver", "datum"], &[]),
            Kind::VerifyBilinear | Kind::VerifyShorttime | Kind::VerifyLinearStrichartz => (&["grid", "probe"], &[]),
            Kind::VerifyKernel => (&[], &["kernel"]),
            Kind::Transversality => (&["transversality"], &[]),
            Kind::ResonanceScan => (&["resonance"], &[]),
            Kind::BonaSmith => (&["grid", "solver", "datum", "bona_smith"], &[]),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

const COMMON: &str = "\
seed = 0                      # u64, default 0
out_dir = \"out/<kind>\"        # optional; --out and FZK_OUT_DIR take precedence

[params]
family = \"isotropic\"          # isotropic | multi-directional | ribaud-vento
a = 2.0                       # in [1, 2]; a list sweeps
n = 2
period = 6.283185307179586    # box length L, default 2π
";

const GRID: &str = "
[grid]
M = 128                       # modes per direction, even
";

const PROBE: &str = "
[probe]
high = [16, 32, 64]           # dyadic N
low = [1, 2]                  # dyadic K
trials = 50
T = 0.1                       # optional; default depends on the kind
time_samples = 512            # optional; must keep Δt·max|φ| ≤ π/4
allow_wrap = false            # allow horizons past the wrap-around time
";

const SOLVER: &str = "
[solver]
T = 1.0
dt = 1e-4                     # optional; default dt·max|φ| = 0.5
dealias = \"two-thirds\"        # two-thirds | none
diag_every = 10
sobolev = [1.0, 2.0, 3.0]
snapshot_every = 0            # keep every k-th sample; 0 keeps first and last

[datum]
regularity = 3.0              # random datum in H^regularity (seeded)
# modes = [[1, 0, 0.5, 0.0]]  # or explicit modes [k₁, …, kₙ, re, im]
norm = 1.0                    # optional: rescale to this H^norm_s norm
norm_s = 3.0
max_k = 42                    # optional: default is the dealiased band
";

/// Schema, defaults and the targeted statement of each experiment kind.
pub fn describe(kind: Kind) -> String {
    let (target, body) = match kind {
        Kind::Simulate => (
            "Evolves ∂ₜu + ∂_{x_1}(−Δ)^{a/2}u = u ∂_{x_1} u on the periodic box with an \
integrating-factor RK4 scheme and records the mass ∫u², the energy \
∫|D^{a/2}u|² − (1/3)u³, Sobolev norms and the per-shell ledger sup_t ‖P_N u(t)‖.\n\
Outputs: diagnostics.csv, snapshots/*.fzk (+ .json), summary.json, shells.svg.",
            format!("{GRID}{SOLVER}"),
        ),
        Kind::VerifyBilinear => (
            "Checks ‖S(t)P_N u₀ · S(t)P_K v₀‖_{L²([0,T]×Tⁿ)} ≲ (K^{n−1}/N^a)^{1/2} ‖P_N u₀‖ ‖P_K v₀‖ \
for K ≤ N/8 by random trials; the max ratio should not grow with N.\n\
Outputs: trials.csv, summary.csv, summary.json, ratios.svg.",
            format!("{GRID}{PROBE}"),
        ),
        Kind::VerifyShorttime => (
            "Checks the shorttime bilinear bound on intervals |I| = N^{a−2}: \
‖∂_{x_1}(S(t)P_N u₀ · S(t)P_K v₀)‖_{L¹_t L²_x} ≲ N^{1+(a−2)/2} (K^{n−1}/N^a)^{1/2} ‖P_N u₀‖ ‖P_K v₀‖; \
the normalized ratio should be uniform in N.\n\
Outputs: trials.csv, summary.csv, summary.json, ratios.svg.",
            format!("{GRID}{PROBE}"),
        ),
        Kind::VerifyKernel => (
            "Scans |t|·sup_x |I(x,t)| for I(x,t) = ∫ ψ(ξ) e^{i(x·ξ + tξ₁|ξ|^a)} dξ (n ≥ 3, annular ψ); \
the dispersive estimate |I(x,t)| ≤ C|t|^{−1} holds when the scaled sup stays bounded.\n\
Outputs: kernel.csv, summary.json, kernel.svg.",
            "
[kernel]                      # optional section
t_max = 64                    # times 1, 2, …, t_max
# t = [1.0, 2.0, 4.0]         # or an explicit list
ratios = 16                   # x₁/t samples per sign
transverse = true
far = 16
"
            .to_string(),
        ),
        Kind::VerifyLinearStrichartz => (
            "Checks ‖S(t)P_N f‖_{L^q_T L^p_x} ≲ N^s ‖P_N f‖ with s = n(1/2 − 1/p) − (a+1)/q \
for admissible 2/q + 2/p = 1 (n ≥ 3).\n\
Outputs: trials.csv, summary.csv, summary.json, ratios.svg.",
            format!("{GRID}{PROBE}q = 4.0\np = 4.0\n"),
        ),
        Kind::Transversality => (
            "Computes c_min = min |∇φ(ξᵢ) − ∇φ(ξⱼ)| / N^a over frequency triples ξ₁ + ξ₂ + ξ₃ = 0 \
in the chosen shells (the best pair i, j per triple); positivity certifies that there are \
i, j with transverse group velocities.\n\
Outputs: transversality.csv, reports.json, cmin.svg.",
            "
[transversality]
constraint = \"high-high-high\" # high-high-high | separated-high-low | zk-small-first-component | shells
N = [8, 16, 32]
low = 2                       # K for separated-high-low
shells = [1024, 1, 1]         # labels for shells
enumeration = \"auto\"          # auto | exhaustive | sampled
samples = 1000000
"
            .to_string(),
        ),
        Kind::ResonanceScan => (
            "Tabulates Ω(ξ₁, ξ₂) = φ(ξ₁+ξ₂) − φ(ξ₁) − φ(ξ₂) on the integer box |ξᵢ,ⱼ| ≤ radius; \
for a = 2 the values are exact integers.\n\
Outputs: resonance.csv, summary.json, resonance.svg.",
            "
[resonance]
radius = 4
"
            .to_string(),
        ),
        Kind::BonaSmith => (
            "Evolves u₀ and its truncations P_{≤N}u₀ and records sup_t ‖u − u_N‖_{H^{s'}} for \
s' ∈ {0, s}; continuous dependence shows as tables decreasing in N, with the L² column \
decaying like N^{−s} or faster.\n\
Outputs: bona_smith.csv, summary.json, bona_smith.svg.",
            format!("{GRID}{SOLVER}\n[bona_smith]\ns = 2.0\ncutoffs = [4, 8, 16, 32]\n"),
        ),
    };
    format!("kind: {kind}\n\n{target}\n\nconfig (TOML):\n\nkind = \"{kind}\"\n{COMMON}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing_ignores_case_and_separators() {
        assert_eq!(Kind::parse("VerifyBilinear"), Ok(Kind::VerifyBilinear));
        assert_eq!(Kind::parse("verify_bilinear"), Ok(Kind::VerifyBilinear));
        assert_eq!(Kind::parse("bona-smith"), Ok(Kind::BonaSmith));
        let e = Kind::parse("teleport").unwrap_err();
        assert!(e.contains("unknown experiment kind"));
    }

    #[test]
    fn descriptions_carry_their_anchors() {
        for k in Kind::ALL {
            assert!(!describe(k).is_empty());
        }
        assert!(describe(Kind::VerifyBilinear).contains("(K^{n−1}/N^a)^{1/2}"));
        assert!(describe(Kind::Simulate).contains("u ∂_{x_1} u"));
    }
}
