//! `fzk <kind> --config <file> [--seed S] [--out DIR] [--threads K]`
//! `fzk describe <kind>`

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fzk::harness::{describe, run_toml, HarnessError, Kind, RunOptions};

#[derive(Parser)]
#[command(
    name = "fzk",
    version,
    about = "Fractional Zakharov-Kuznetsov simulation and estimate checks"
)]
struct Cli {
    /// Experiment kind (simulate, verify-bilinear, …) or `describe`.
    kind: String,
    /// Kind to describe, with `describe`.
    target: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long)]
    threads: Option<usize>,
}

fn fail(e: HarnessError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.kind == "describe" {
        let Some(target) = cli.target else {
            for k in Kind::ALL {
                println!("{}\n", describe(k));
            }
            return ExitCode::SUCCESS;
        };
        return match Kind::parse(&target) {
            Ok(k) => {
                println!("{}", describe(k));
                ExitCode::SUCCESS
            }
            Err(e) => fail(HarnessError::Schema(e)),
        };
    }
    if cli.target.is_some() {
        return fail(HarnessError::Schema("unexpected extra argument".into()));
    }
    let kind = match Kind::parse(&cli.kind) {
        Ok(k) => k,
        Err(e) => return fail(HarnessError::Schema(e)),
    };
    let Some(config) = cli.config else {
        return fail(HarnessError::Schema("--config is required".into()));
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global() {
            return fail(HarnessError::Schema(format!("--threads: {e}")));
        }
    }
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => return fail(HarnessError::Io(format!("{}: {e}", config.display()))),
    };
    let opts = RunOptions {
        kind: Some(kind),
        seed: cli.seed,
        out_dir: cli.out,
    };
    match run_toml(&text, &opts) {
        Ok(out) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out.manifest.spec_echo).unwrap_or_default()
            );
            println!(
                "{}",
                serde_json::to_string_pretty(&out.summary["results"]).unwrap_or_default()
            );
            println!(
                "wrote {} files to {}",
                out.manifest.files.len() + 1,
                out.out_dir.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
