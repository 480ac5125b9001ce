use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    /// Path relative to the output directory, `/`-separated.
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub spec_echo: serde_json::Value,
    pub files: Vec<FileEntry>,
    pub versions: serde_json::Value,
}

/// Output directory of one run.
pub struct Artifacts {
    root: PathBuf,
}

impl Artifacts {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Artifacts {
            root: root.to_path_buf(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn subdir(&self, name: &str) -> Result<PathBuf> {
        let p = self.root.join(name);
        fs::create_dir_all(&p)?;
        Ok(p)
    }

    pub fn write(&self, name: &str, bytes: impl AsRef<[u8]>) -> Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, bytes)?;
        Ok(p)
    }

    pub fn write_json(&self, name: &str, value: &impl Serialize) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text)
    }

    /// Hashes every file under the root (except the manifest itself) and
    /// writes `manifest.json`.
    pub fn finish(&self, spec_echo: serde_json::Value) -> Result<Manifest> {
        let mut paths = Vec::new();
        collect(&self.root, &mut paths)?;
        paths.sort();
        let mut files = Vec::new();
        for p in paths {
            let rel = p
                .strip_prefix(&self.root)
                .expect("collected under root")
                .components()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .collect::<Vec<_>>()
                .join("/");
            if rel == MANIFEST {
                continue;
            }
            files.push(FileEntry {
                path: rel,
                sha256: sha256_hex(&fs::read(&p)?),
            });
        }
        let manifest = Manifest {
            spec_echo,
            files,
            versions: serde_json::json!({
                "fzk": env!("CARGO_PKG_VERSION"),
                "field_format": "FZK1",
            }),
        };
        self.write_json(MANIFEST, &manifest)?;
        Ok(manifest)
    }
}

fn collect(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir)? {
        let p = entry?.path();
        if p.is_dir() {
            collect(&p, out)?;
        } else {
            out.push(p);
        }
    }
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
