//! Runs every sample config through the harness and lists the artifacts.
//!
//! `cargo run --release --example harness_run [OUT_DIR]`

use std::path::{Path, PathBuf};

use fzk::harness::{run_toml, RunOptions};

fn main() {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fzk_harness_run"));
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&configs)
        .expect("configs directory")
        .flatten()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    for path in paths {
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(&path).expect("readable config");
        let opts = RunOptions {
            out_dir: Some(out.join(&stem)),
            ..RunOptions::default()
        };
        match run_toml(&text, &opts) {
            Ok(outcome) => {
                println!("{stem} ({}) -> {}", outcome.kind, outcome.out_dir.display());
                for f in &outcome.manifest.files {
                    println!("  {}  {}", &f.sha256[..12], f.path);
                }
            }
            Err(e) => println!("{stem}: {}", e.to_json()),
        }
    }
}
