//! CSV and gnuplot writers, and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use graphspread::{MeanCurve, UncertaintyCurve};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// `s,g,slope`, one row per point, 17 significant digits.
pub fn curve_csv(curve: &UncertaintyCurve) -> String {
    let mut out = String::from("s,g,slope\n");
    for p in curve.points() {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", p.s, p.g, p.slope);
    }
    out
}

/// `s,mean_g,stddev_g,trials`.
pub fn mean_curve_csv(mean: &MeanCurve) -> String {
    let mut out = String::from("s,mean_g,stddev_g,trials\n");
    for ((s, g), sd) in mean.s.iter().zip(&mean.mean_g).zip(&mean.stddev_g) {
        let _ = writeln!(out, "{s:.16e},{g:.16e},{sd:.16e},{}", mean.trials);
    }
    out
}

/// Whitespace-separated `s g` rows under a comment header.
pub fn gnuplot_block(header: &[(&str, String)], rows: impl Iterator<Item = (f64, f64)>) -> String {
    let mut out = String::new();
    for (key, value) in header {
        let _ = writeln!(out, "# {key}: {value}");
    }
    out.push_str("# spectral_spread_squared graph_spread_squared\n");
    for (s, g) in rows {
        let _ = writeln!(out, "{s:.16e} {g:.16e}");
    }
    out
}

pub fn gnuplot_path(csv: &Path) -> PathBuf {
    csv.with_extension("dat")
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Arguments as given, without the program name.
    pub command_line: Vec<String>,
    pub command: String,
    pub seed: Option<u64>,
    pub family: Option<String>,
    pub parameters: Vec<(String, String)>,
    pub kinds: Vec<String>,
    pub u0: usize,
    pub tolerance: f64,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command_line: &[String], command: &str) -> Self {
        RunManifest {
            command_line: command_line.to_vec(),
            command: command.to_string(),
            seed: None,
            family: None,
            parameters: Vec::new(),
            kinds: Vec::new(),
            u0: 0,
            tolerance: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            outputs: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("cannot serialize manifest: {e}")))?;
        write_file(path, json + "\n")
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: invalid manifest: {e}", path.display())))
    }

    /// The recorded command line with its `--out` value replaced.
    pub fn command_line_with_out(&self, out: &Path) -> Vec<String> {
        let out = out.display().to_string();
        let mut args = Vec::with_capacity(self.command_line.len() + 2);
        let mut iter = self.command_line.iter();
        let mut replaced = false;
        while let Some(arg) = iter.next() {
            if arg == "--out" {
                iter.next();
                args.push("--out".to_string());
                args.push(out.clone());
                replaced = true;
            } else if arg.starts_with("--out=") {
                args.push(format!("--out={out}"));
                replaced = true;
            } else {
                args.push(arg.clone());
            }
        }
        if !replaced {
            args.push("--out".to_string());
            args.push(out);
        }
        args
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_flag_replacement() {
        let m = RunManifest::new(
            &["curve".into(), "--out".into(), "a.csv".into(), "--n".into(), "3".into()],
            "curve",
        );
        assert_eq!(
            m.command_line_with_out(Path::new("b.csv")),
            vec!["curve", "--out", "b.csv", "--n", "3"]
        );
        let m = RunManifest::new(&["curve".into(), "--out=a.csv".into()], "curve");
        assert_eq!(m.command_line_with_out(Path::new("b.csv")), vec!["curve", "--out=b.csv"]);
        let m = RunManifest::new(&["curve".into()], "curve");
        assert_eq!(m.command_line_with_out(Path::new("b.csv")), vec!["curve", "--out", "b.csv"]);
    }

    #[test]
    fn manifest_path_appends_suffix() {
        assert_eq!(manifest_path(Path::new("x/out.csv")), PathBuf::from("x/out.csv.manifest.json"));
    }
}
