//! Deterministic artifact writers: verification reports as JSON lines, CSV
//! tables with a header row, and a minimal SVG 1.1 writer for curves,
//! heatmaps and histograms. Every plot is regenerable from its CSV; nothing
//! here embeds timestamps, so identical inputs give byte-identical output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// The premise of the theorem is not met by the input; nothing tested.
    #[serde(rename = "NOT_APPLICABLE")]
    NotApplicable,
    /// The inequality holds for trivial reasons (for example `u(x̂) ≤ 0`);
    /// distinct from PASS because it tests nothing.
    #[serde(rename = "VACUOUS")]
    Vacuous,
    #[serde(rename = "INFO")]
    Info,
}

/// One named theorem check: margins, tolerance with its derivation, verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub check: String,
    pub inputs_digest: String,
    pub margins: Vec<(String, f64)>,
    pub tolerance: f64,
    pub tolerance_derivation: String,
    pub verdict: Verdict,
    pub details: Vec<(String, String)>,
    pub artifacts: Vec<String>,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

impl VerificationReport {
    /// Builds a report whose verdict follows the margin rule:
    /// PASS iff `margin ≥ −tolerance`.
    pub fn from_margin(
        check: impl Into<String>,
        digest: impl Into<String>,
        margin: f64,
        tolerance: f64,
        derivation: impl Into<String>,
    ) -> Self {
        let verdict = if margin >= -tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        VerificationReport {
            schema_version: REPORT_SCHEMA_VERSION,
            check: check.into(),
            inputs_digest: digest.into(),
            margins: vec![("margin".into(), margin)],
            tolerance,
            tolerance_derivation: derivation.into(),
            verdict,
            details: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn named(check: impl Into<String>, digest: impl Into<String>, verdict: Verdict) -> Self {
        VerificationReport {
            schema_version: REPORT_SCHEMA_VERSION,
            check: check.into(),
            inputs_digest: digest.into(),
            margins: Vec::new(),
            tolerance: 0.0,
            tolerance_derivation: String::new(),
            verdict,
            details: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn with_margin(mut self, name: impl Into<String>, value: f64) -> Self {
        self.margins.push((name.into(), value));
        self
    }

    pub fn with_detail(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.details.push((key.into(), value.into()));
        self
    }

    pub fn margin(&self) -> f64 {
        self.margins
            .iter()
            .find(|(n, _)| n == "margin")
            .or_else(|| self.margins.first())
            .map(|(_, v)| *v)
            .unwrap_or(f64::NAN)
    }

    pub fn passing(&self) -> bool {
        matches!(
            self.verdict,
            Verdict::Pass | Verdict::Vacuous | Verdict::NotApplicable | Verdict::Info
        )
    }
}

/// FNV-1a digest of a canonical input description; hex-printed.
pub fn digest(parts: &[&str]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for p in parts {
        for b in p.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h ^= 0x1f;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// Appends reports as JSON lines.
pub fn write_jsonl(path: &Path, reports: &[VerificationReport]) -> Result<()> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serialization"));
        out.push('\n');
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, out)?;
    Ok(())
}

/// Human-readable one-line-per-check summary.
pub fn summary_table(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<34} {:>14} {:>12}  verdict",
        "check", "margin", "tolerance"
    );
    for r in reports {
        let _ = writeln!(
            s,
            "{:<34} {:>14.6e} {:>12.2e}  {:?}",
            r.check,
            r.margin(),
            r.tolerance,
            r.verdict
        );
    }
    s
}

/// CSV with a header row; floats printed with full round-trip precision.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, out)?;
    Ok(())
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 48.0;

fn svg_open(title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"13\">{title}</text>\n",
        W / 2.0
    )
}

fn axis_map(vals: &[f64]) -> (f64, f64) {
    let mut lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-300 {
        lo -= 0.5;
        hi += 0.5;
    }
    (lo, hi)
}

/// Polyline plot of one or more named series sharing an x-grid.
pub fn write_svg_curves(
    path: &Path,
    title: &str,
    xs: &[f64],
    series: &[(&str, &[f64])],
) -> Result<()> {
    let mut s = svg_open(title);
    let (xlo, xhi) = axis_map(xs);
    let all_y: Vec<f64> = series
        .iter()
        .flat_map(|(_, ys)| ys.iter().cloned())
        .collect();
    let (ylo, yhi) = axis_map(&all_y);
    let tx = |x: f64| PAD + (x - xlo) / (xhi - xlo) * (W - 2.0 * PAD);
    let ty = |y: f64| H - PAD - (y - ylo) / (yhi - ylo) * (H - 2.0 * PAD);
    let colors = ["#1f6fb2", "#b23a1f", "#3a9c3a", "#7a4fb2"];
    let _ = writeln!(
        s,
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>",
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for (k, (name, ys)) in series.iter().enumerate() {
        let mut pts = String::new();
        for (x, y) in xs.iter().zip(ys.iter()) {
            let _ = write!(pts, "{:.2},{:.2} ", tx(*x), ty(*y));
        }
        let color = colors[k % colors.len()];
        let _ = writeln!(
            s,
            "<polyline points=\"{pts}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" \
             fill=\"{color}\">{name}</text>",
            W - PAD - 120.0,
            PAD + 14.0 * (k + 1) as f64
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{PAD}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">[{xlo:.3}, {xhi:.3}] x  \
         [{ylo:.3e}, {yhi:.3e}] y</text>",
        H - 12.0
    );
    s.push_str("</svg>\n");
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, s)?;
    Ok(())
}

/// Scatter heatmap of samples `(x, y, value)` colored on a blue-red ramp.
pub fn write_svg_heatmap(path: &Path, title: &str, points: &[(f64, f64, f64)]) -> Result<()> {
    let mut s = svg_open(title);
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let vs: Vec<f64> = points.iter().map(|p| p.2).collect();
    let (xlo, xhi) = axis_map(&xs);
    let (ylo, yhi) = axis_map(&ys);
    let (vlo, vhi) = axis_map(&vs);
    let tx = |x: f64| PAD + (x - xlo) / (xhi - xlo) * (W - 2.0 * PAD);
    let ty = |y: f64| H - PAD - (y - ylo) / (yhi - ylo) * (H - 2.0 * PAD);
    for (x, y, v) in points {
        let t = ((v - vlo) / (vhi - vlo)).clamp(0.0, 1.0);
        let r = (255.0 * t) as u8;
        let b = (255.0 * (1.0 - t)) as u8;
        let _ = writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"3\" height=\"3\" fill=\"rgb({r},60,{b})\"/>",
            tx(*x),
            ty(*y)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{PAD}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">value range \
         [{vlo:.3e}, {vhi:.3e}]</text>",
        H - 12.0
    );
    s.push_str("</svg>\n");
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, s)?;
    Ok(())
}

/// Histogram with `bins` equal-width bins.
pub fn write_svg_histogram(path: &Path, title: &str, values: &[f64], bins: usize) -> Result<()> {
    let (lo, hi) = axis_map(values);
    let bins = bins.max(1);
    let mut counts = vec![0usize; bins];
    for v in values {
        let k = (((v - lo) / (hi - lo)) * bins as f64).floor() as isize;
        let k = k.clamp(0, bins as isize - 1) as usize;
        counts[k] += 1;
    }
    let cmax = counts.iter().cloned().max().unwrap_or(1).max(1) as f64;
    let mut s = svg_open(title);
    let bw = (W - 2.0 * PAD) / bins as f64;
    for (k, c) in counts.iter().enumerate() {
        let bh = (H - 2.0 * PAD) * *c as f64 / cmax;
        let _ = writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#1f6fb2\" \
             stroke=\"white\"/>",
            PAD + k as f64 * bw,
            H - PAD - bh,
            bw,
            bh
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{PAD}\" y=\"{}\" font-family=\"monospace\" font-size=\"10\">range [{lo:.3e}, \
         {hi:.3e}], n = {}</text>",
        H - 12.0,
        values.len()
    );
    s.push_str("</svg>\n");
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, s)?;
    Ok(())
}

/// Output location helper: a directory that callers may not have created.
pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}
