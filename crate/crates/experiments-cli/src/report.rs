use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::CliError;
use crate::run::{ExperimentReport, Row};

pub const CSV_HEADER: &str =
    "experiment,n,quantity,value_re,value_im,stderr_or_bound,target_re,target_im,holds,seed,runtime_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `json` for a `.json` path, CSV otherwise.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// 17 significant digits, enough to round-trip any f64.
fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(r: &Row) -> String {
    [
        r.experiment.to_string(),
        r.n.to_string(),
        csv_field(&r.quantity),
        real(r.value_re),
        real(r.value_im),
        opt(r.stderr_or_bound),
        opt(r.target_re),
        opt(r.target_im),
        r.holds.to_string(),
        r.seed.to_string(),
        real(r.runtime_ms),
    ]
    .join(",")
}

pub fn to_csv(report: &ExperimentReport) -> String {
    let mut s = String::with_capacity(64 * (report.rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &report.rows {
        writeln!(s, "{}", csv_row(r)).expect("writing to a String");
    }
    s
}

pub fn to_json(report: &ExperimentReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn render(report: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Csv => to_csv(report),
        Format::Json => to_json(report),
    }
}

/// Write through a temporary file in the target directory and rename it
/// into place, so readers never see a partial report.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("report");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

pub fn emit(report: &ExperimentReport, format: Format, path: &Path) -> Result<(), CliError> {
    write_atomic(path, render(report, format).as_bytes())
}

pub fn read_report(path: &Path) -> Result<ExperimentReport, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: format!("not a JSON report ({e}); replay needs a report written with --format json"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(real(std::f64::consts::E), "2.7182818284590451e0");
        assert_eq!(real(-1e-300), "-1.0000000000000000e-300");
        assert_eq!(real(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(real(f64::NAN), "NaN");
        assert_eq!(opt(None), "");
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("cross[k=1,l=4]"), "\"cross[k=1,l=4]\"");
        assert_eq!(csv_field("mean[k=1]"), "mean[k=1]");
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(Format::from_path(Path::new("a/b.JSON")), Format::Json);
        assert_eq!(Format::from_path(Path::new("a/b.csv")), Format::Csv);
        assert_eq!(Format::from_path(Path::new("b")), Format::Csv);
    }
}
