//! Field container format.
//!
//! ```text
//! offset  size  content
//! 0       4     magic "FZK1"
//! 4       4     n          (u32, little endian)
//! 8       4     M          (u32, little endian)
//! 12      8     L          (f64, little endian)
//! 20      1     real_flag  (0 or 1)
//! 21      3     reserved, zero
//! 24      8·Mⁿ  coefficients: (re f32, im f32) little endian, row-major over
//!               signed wavenumbers −M/2 … M/2−1, last axis fastest
//! ```
//!
//! A JSON sidecar `<file>.json` repeats the header for tooling.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::grid::SpectralGrid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"FZK1";
pub const HEADER_LEN: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub magic: String,
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "L")]
    pub period: f64,
    pub real_flag: bool,
}

impl FieldHeader {
    pub fn of(field: &Field) -> Self {
        let g = field.grid();
        FieldHeader {
            magic: "FZK1".into(),
            n: g.dim() as u32,
            m: g.modes_per_dim() as u32,
            period: g.period(),
            real_flag: field.is_real(),
        }
    }
}

/// Flat storage indices in signed-frequency row-major order.
fn signed_order(grid: &SpectralGrid) -> impl Iterator<Item = usize> + '_ {
    let m = grid.modes_per_dim();
    let n = grid.dim();
    (0..grid.len()).map(move |pos| {
        // pos enumerates signed wavenumbers; digit j ↦ k = j − M/2 ↦ storage (k mod M)
        let mut rest = pos;
        let mut flat = 0usize;
        let mut stride = 1usize;
        for _ in 0..n {
            let j = rest % m;
            rest /= m;
            let storage = (j + m / 2) % m;
            flat += storage * stride;
            stride *= m;
        }
        flat
    })
}

pub fn encode_field(field: &Field) -> Vec<u8> {
    let g = field.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * g.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.modes_per_dim() as u32).to_le_bytes());
    out.extend_from_slice(&g.period().to_le_bytes());
    out.push(field.is_real() as u8);
    out.extend_from_slice(&[0u8; 3]);
    let coeffs = field.coeffs();
    for flat in signed_order(g) {
        let c = coeffs[flat];
        out.extend_from_slice(&(c.re as f32).to_le_bytes());
        out.extend_from_slice(&(c.im as f32).to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<Field> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format("truncated header".into()));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let n = u32_at(4) as usize;
    let m = u32_at(8) as usize;
    let period = f64::from_le_bytes(bytes[12..20].try_into().expect("8 bytes"));
    let real = match bytes[20] {
        0 => false,
        1 => true,
        other => return Err(Error::Format(format!("bad real flag {other}"))),
    };
    let grid = SpectralGrid::new(n, m, period).map_err(|e| Error::Format(e.to_string()))?;
    let expected = HEADER_LEN + 8 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    let f32_at = |o: usize| f32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes")) as f64;
    for (pos, flat) in signed_order(&grid).enumerate() {
        let o = HEADER_LEN + 8 * pos;
        coeffs[flat] = Complex64::new(f32_at(o), f32_at(o + 4));
    }
    if real {
        Field::from_coefficients_real(&grid, coeffs)
    } else {
        Field::from_coefficients(&grid, coeffs)
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes the binary container and its JSON sidecar; returns both paths.
pub fn write_field(path: &Path, field: &Field) -> Result<(PathBuf, PathBuf)> {
    fs::write(path, encode_field(field))?;
    let side = sidecar_path(path);
    fs::write(&side, serde_json::to_string_pretty(&FieldHeader::of(field))?)?;
    Ok((path.to_path_buf(), side))
}

pub fn read_field(path: &Path) -> Result<Field> {
    decode_field(&fs::read(path)?)
}
