//! Plain-text interchange formats shared by the CLI and the pipeline:
//! coefficient series files, solution grid tables, and measurement tables.
//! All floating-point output uses 17 significant digits so files are
//! byte-stable and round-trip exactly.

use crate::basis::SeriesField;
use crate::error::{Error, Result};
use crate::modes::TimePair;
use std::fmt::Write as _;
use std::path::Path;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serialize a coefficient field: header `N=<int>`, then `k n value` records
/// in deterministic order.
pub fn series_to_string(field: &SeriesField) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "N={}", field.truncation());
    for (idx, c) in field.iter() {
        let _ = writeln!(s, "{} {} {}", idx.k(), idx.n(), fmt(c));
    }
    s
}

pub fn write_series(field: &SeriesField, path: &Path) -> Result<()> {
    std::fs::write(path, series_to_string(field))?;
    Ok(())
}

pub fn series_from_str(text: &str) -> Result<SeriesField> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty series file".into()))?;
    let n: usize = header
        .trim()
        .strip_prefix("N=")
        .ok_or_else(|| Error::Format(format!("expected 'N=<int>' header, got '{header}'")))?
        .parse()
        .map_err(|e| Error::Format(format!("bad truncation: {e}")))?;
    let mut field = SeriesField::zeros(n);
    for line in lines {
        let mut parts = line.split_whitespace();
        let (k, m, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(k), Some(m), Some(v)) => (k, m, v),
            _ => return Err(Error::Format(format!("short record '{line}'"))),
        };
        let k: u8 = k
            .parse()
            .map_err(|e| Error::Format(format!("bad k in '{line}': {e}")))?;
        let m: usize = m
            .parse()
            .map_err(|e| Error::Format(format!("bad n in '{line}': {e}")))?;
        let v: f64 = v
            .parse()
            .map_err(|e| Error::Format(format!("bad value in '{line}': {e}")))?;
        match (k, m) {
            (1, 0) => field.c10 = v,
            (1, i) if (1..=n).contains(&i) => field.c1[i - 1] = v,
            (2, i) if (1..=n).contains(&i) => field.c2[i - 1] = v,
            _ => return Err(Error::Format(format!("index ({k}, {m}) out of range"))),
        }
    }
    Ok(field)
}

pub fn read_series(path: &Path) -> Result<SeriesField> {
    series_from_str(&std::fs::read_to_string(path)?)
}

/// Solution grid table: header `# x t u`, one `x t value` row per point.
pub fn grid_to_string(rows: &[(f64, f64, f64)]) -> String {
    let mut s = String::from("# x t u\n");
    for &(x, t, u) in rows {
        let _ = writeln!(s, "{} {} {}", fmt(x), fmt(t), fmt(u));
    }
    s
}

pub fn write_grid(rows: &[(f64, f64, f64)], path: &Path) -> Result<()> {
    std::fs::write(path, grid_to_string(rows))?;
    Ok(())
}

/// Two-column table `# x value` for source profiles and similar exports.
pub fn profile_to_string(rows: &[(f64, f64)]) -> String {
    let mut s = String::from("# x value\n");
    for &(x, v) in rows {
        let _ = writeln!(s, "{} {}", fmt(x), fmt(v));
    }
    s
}

/// Measurement table: header `# x z h`, rows of three decimals on a uniform
/// ascending x-grid covering [0, 1] with at least 64 points.
pub fn measurement_from_str(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    let mut hs = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|e| Error::Format(format!("bad number '{t}': {e}")))
            })
            .collect::<Result<_>>()?;
        if vals.len() != 3 {
            return Err(Error::Format(format!(
                "expected 3 columns (x z h), got {} in '{line}'",
                vals.len()
            )));
        }
        xs.push(vals[0]);
        zs.push(vals[1]);
        hs.push(vals[2]);
    }
    let n = xs.len();
    if n < 64 {
        return Err(Error::Format(format!(
            "measurement table needs >= 64 points, got {n}"
        )));
    }
    let h = 1.0 / (n - 1) as f64;
    for (i, &x) in xs.iter().enumerate() {
        if (x - i as f64 * h).abs() > 1e-9 {
            return Err(Error::Format(format!(
                "x-grid must be uniform over [0,1]: point {i} is {x}, expected {}",
                i as f64 * h
            )));
        }
    }
    Ok((zs, hs))
}

pub fn read_measurement(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    measurement_from_str(&std::fs::read_to_string(path)?)
}

pub fn write_measurement(xs: &[f64], zs: &[f64], hs: &[f64], path: &Path) -> Result<()> {
    let mut s = String::from("# x z h\n");
    for i in 0..xs.len() {
        let _ = writeln!(s, "{} {} {}", fmt(xs[i]), fmt(zs[i]), fmt(hs[i]));
    }
    std::fs::write(path, s)?;
    Ok(())
}

/// key=value diagnostics block.
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Report {
        Report { lines: Vec::new() }
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.lines.push((key.to_string(), fmt(value)));
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

/// Echo the resolved run configuration into a report header.
pub fn config_header(
    report: &mut Report,
    command: &str,
    alpha: f64,
    gamma: f64,
    times: Option<TimePair>,
    n: usize,
    tol: f64,
) {
    report.push("command", command);
    report.push_f64("alpha", alpha);
    report.push_f64("gamma", gamma);
    if let Some(tp) = times {
        report.push_f64("tm", tp.tm());
        report.push_f64("t_final", tp.t_final());
    }
    report.push("modes", n);
    report.push_f64("tol", tol);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_roundtrip_is_exact() {
        let field = SeriesField::new(
            0.1234567890123456,
            vec![1.0 / 3.0, -2.0e-15],
            vec![7.25, 0.0],
        )
        .unwrap();
        let text = series_to_string(&field);
        let back = series_from_str(&text).unwrap();
        assert_eq!(field, back);
        assert!(text.starts_with("N=2\n"));
    }

    #[test]
    fn series_rejects_malformed() {
        assert!(series_from_str("").is_err());
        assert!(series_from_str("N=2\n3 1 0.5\n").is_err());
        assert!(series_from_str("N=2\n1 7 0.5\n").is_err());
        assert!(series_from_str("bogus\n").is_err());
    }

    #[test]
    fn measurement_grid_validation() {
        let n = 64;
        let mut text = String::from("# x z h\n");
        for i in 0..n {
            let x = i as f64 / (n - 1) as f64;
            text.push_str(&format!("{x} {} {}\n", x * x, 1.0 - x));
        }
        let (zs, hs) = measurement_from_str(&text).unwrap();
        assert_eq!(zs.len(), 64);
        assert!((hs[0] - 1.0).abs() < 1e-15);
        // too few points
        let short: String = text.lines().take(33).collect::<Vec<_>>().join("\n");
        assert!(measurement_from_str(&short).is_err());
    }

    #[test]
    fn grid_table_format() {
        let s = grid_to_string(&[(0.0, 0.3, 1.5)]);
        assert!(s.starts_with("# x t u\n"));
        assert!(s.contains("1.5000000000000000e0"));
    }
}
