//! CSV, plot data, gnuplot scripts and run reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::diagnostics::DiagnosticSeries;
use crate::{Error, Result};

pub const VERSION: &str = concat!("del ", env!("CARGO_PKG_VERSION"));

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn csv_text<S: AsRef<str>>(header: &[S], rows: &[Vec<f64>]) -> String {
    let mut s = header
        .iter()
        .map(AsRef::as_ref)
        .collect::<Vec<_>>()
        .join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_real(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn write_csv<S: AsRef<str>>(path: &Path, header: &[S], rows: &[Vec<f64>]) -> Result<()> {
    write_file(path, &csv_text(header, rows))
}

pub fn plotdata_text(series: &DiagnosticSeries) -> String {
    let mut s = String::from("# t");
    for name in series.names() {
        s.push(' ');
        s.push_str(name);
    }
    s.push('\n');
    for (i, &t) in series.times.iter().enumerate() {
        s.push_str(&fmt_real(t));
        for v in series.row(i) {
            s.push(' ');
            s.push_str(&fmt_real(v));
        }
        s.push('\n');
    }
    s
}

/// Whitespace-separated columns under a `# t <channels…>` header.
pub fn emit_plotdata(series: &DiagnosticSeries, path: &Path) -> Result<()> {
    if series.is_empty() {
        return Err(Error::InvalidValue {
            key: "series".into(),
            msg: "nothing to write".into(),
        });
    }
    write_file(path, &plotdata_text(series))
}

/// Inverse of [`plotdata_text`]: column names (including `t`) and rows.
pub fn parse_plotdata(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().enumerate();
    let names: Vec<String> = match lines.next() {
        Some((_, h)) if h.starts_with('#') => h[1..].split_whitespace().map(String::from).collect(),
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "missing `#` header".into(),
            })
        }
    };
    let mut rows = Vec::new();
    for (i, line) in lines {
        let row: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("{e}"),
            })?;
        if row.len() != names.len() {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected {} columns, got {}", names.len(), row.len()),
            });
        }
        rows.push(row);
    }
    Ok((names, rows))
}

/// Script plotting columns `2..` of a CSV against column 1.
pub fn gnuplot_script(title: &str, data: &str, columns: &[&str], logscale_x: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(
        s,
        "set xlabel '{}'",
        columns.first().copied().unwrap_or("x")
    );
    if logscale_x {
        let _ = writeln!(s, "set logscale x");
    }
    let _ = writeln!(s, "set key outside");
    let _ = writeln!(s, "set terminal pngcairo size 1000,640");
    let _ = writeln!(s, "set output '{title}.png'");
    let plots: Vec<String> = (2..=columns.len())
        .map(|i| {
            format!(
                "'{data}' every ::1 using 1:{i} with lines title '{}'",
                columns[i - 1]
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckVerdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub experiment: String,
    pub wall_time: Duration,
    pub files: Vec<PathBuf>,
    pub checks: Vec<CheckVerdict>,
    pub version: String,
}

impl RunReport {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            wall_time: Duration::ZERO,
            files: Vec::new(),
            checks: Vec::new(),
            version: VERSION.to_string(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckVerdict {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment = {}", self.experiment);
        let _ = writeln!(s, "version = {}", self.version);
        let _ = writeln!(s, "wall_time_s = {:.3}", self.wall_time.as_secs_f64());
        for f in &self.files {
            let _ = writeln!(s, "file = {}", f.display());
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "check {} = {verdict}  {}", c.name, c.detail);
        }
        let _ = writeln!(
            s,
            "overall = {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.text())
    }
}

/// Writes `text` to `dir/name` and records it in `report`.
pub(crate) fn emit(report: &mut RunReport, dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    write_file(&path, text)?;
    report.files.push(path);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_layout() {
        let text = csv_text(&["a", "b"], &[vec![1.0, 2.0]]);
        assert_eq!(text, "a,b\n1.0000000000000000e0,2.0000000000000000e0\n");
    }

    #[test]
    fn report_verdicts() {
        let mut r = RunReport::new("figure1");
        r.check("one", true, "ok");
        assert!(r.passed());
        r.check("two", false, "bad");
        assert!(!r.passed());
        let text = r.text();
        assert!(text.contains("check two = FAIL"));
        assert!(text.ends_with("overall = FAIL\n"));
        assert!(text.contains(VERSION));
    }

    #[test]
    fn gnuplot_mentions_every_column() {
        let s = gnuplot_script("fig", "fig.csv", &["xi", "a", "b"], false);
        assert!(s.contains("using 1:2") && s.contains("using 1:3"));
        assert!(!s.contains("using 1:4"));
    }
}
