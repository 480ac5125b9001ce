//! Static SVG line and scatter plots read back from emitted CSV files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{csv_err, Error, Result};

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD_L: f64 = 70.0;
const PAD_R: f64 = 150.0;
const PAD_T: f64 = 30.0;
const PAD_B: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

#[derive(Clone, Debug)]
pub struct PlotSpec<'a> {
    pub title: &'a str,
    pub x: &'a str,
    /// One or more y columns; each becomes a series (per group).
    pub y: &'a [&'a str],
    /// Columns whose values split rows into separate series.
    pub group_by: &'a [&'a str],
    pub log_x: bool,
    pub log_y: bool,
    /// Draw markers only.
    pub scatter: bool,
}

type Series = BTreeMap<String, Vec<(f64, f64)>>;

fn read_series(csv_path: &Path, spec: &PlotSpec) -> Result<Series> {
    let mut rdr = csv::Reader::from_path(csv_path).map_err(csv_err)?;
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Format(format!("column {name} missing from {}", csv_path.display())))
    };
    let xi = col(spec.x)?;
    let yi: Vec<usize> = spec.y.iter().map(|y| col(y)).collect::<Result<_>>()?;
    let gi: Vec<usize> = spec.group_by.iter().map(|g| col(g)).collect::<Result<_>>()?;
    let mut out = Series::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let Ok(x) = rec[xi].parse::<f64>() else { continue };
        let group: Vec<String> = gi
            .iter()
            .zip(spec.group_by)
            .map(|(&i, name)| format!("{name}={}", &rec[i]))
            .collect();
        for (&i, name) in yi.iter().zip(spec.y) {
            let Ok(y) = rec[i].parse::<f64>() else { continue };
            let mut label = group.clone();
            if spec.y.len() > 1 {
                label.insert(0, name.to_string());
            }
            out.entry(label.join(" ")).or_default().push((x, y));
        }
    }
    Ok(out)
}

/// Renders `spec` from the CSV at `csv_path`; points that cannot be shown on
/// log axes are dropped.
pub fn render(csv_path: &Path, spec: &PlotSpec) -> Result<String> {
    let mut series = read_series(csv_path, spec)?;
    for pts in series.values_mut() {
        pts.retain(|&(x, y)| x.is_finite() && y.is_finite() && (!spec.log_x || x > 0.0) && (!spec.log_y || y > 0.0));
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let tx = |v: f64| if spec.log_x { v.log10() } else { v };
    let ty = |v: f64| if spec.log_y { v.log10() } else { v };
    let all: Vec<(f64, f64)> = series.values().flatten().map(|&(x, y)| (tx(x), ty(y))).collect();
    let (mut x0, mut x1, mut y0, mut y1) = all.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if all.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let (pw, ph) = (W - PAD_L - PAD_R, H - PAD_T - PAD_B);
    let sx = |v: f64| PAD_L + (tx(v) - x0) / (x1 - x0) * pw;
    let sy = |v: f64| PAD_T + ph - (ty(v) - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="18" font-size="13">{}</text>"#,
        PAD_L,
        escape(spec.title)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{PAD_L}" y="{PAD_T}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (vx, vy) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (PAD_L + f * pw, PAD_T + ph - f * ph);
        let lx = if spec.log_x {
            format!("1e{vx:.2}")
        } else {
            format!("{vx:.4}")
        };
        let ly = if spec.log_y {
            format!("1e{vy:.2}")
        } else {
            format!("{vy:.4}")
        };
        let _ = writeln!(
            s,
            r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{lx}</text>"#,
            PAD_T + ph + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{ly}</text>"#,
            PAD_L - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        PAD_L + pw / 2.0,
        H - 10.0,
        escape(spec.x)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        PAD_T + ph / 2.0,
        PAD_T + ph / 2.0,
        escape(&spec.y.join(", "))
    );
    for (k, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        if !spec.scatter && pts.len() > 1 {
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
        }
        for &(x, y) in pts {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = PAD_T + 12.0 + 16.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            W - PAD_R + 10.0,
            ly - 9.0,
            W - PAD_R + 24.0,
            ly,
            escape(if label.is_empty() { spec.y[0] } else { label })
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_grouped_loglog_series() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        std::fs::write(&p, "N,K,ratio\n16,1,0.5\n32,1,0.52\n16,2,0.7\n32,2,0.0\n").unwrap();
        let svg = render(
            &p,
            &PlotSpec {
                title: "ratios",
                x: "N",
                y: &["ratio"],
                group_by: &["K"],
                log_x: true,
                log_y: true,
                scatter: false,
            },
        )
        .unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("K=1") && svg.contains("K=2"));
        // the zero ratio is dropped on log axes
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn missing_column_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        std::fs::write(&p, "x,y\n1,2\n").unwrap();
        let spec = PlotSpec {
            title: "",
            x: "x",
            y: &["z"],
            group_by: &[],
            log_x: false,
            log_y: false,
            scatter: true,
        };
        assert!(render(&p, &spec).is_err());
    }
}
