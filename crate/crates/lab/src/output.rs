//! Result files: CSV with 17 significant digits, pretty JSON, run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{LabError, LabResult};

/// `x` with 17 significant digits, independent of locale.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> LabResult<Self> {
        fs::create_dir_all(root).map_err(|e| LabError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    pub fn write_csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> LabResult<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.root.join(name);
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| LabError::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> LabResult<()> {
        let path = self.root.join(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| LabError::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Gate {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub expint_lab: &'static str,
    pub expint_core: &'static str,
}

impl Default for Versions {
    fn default() -> Self {
        Self {
            expint_lab: env!("CARGO_PKG_VERSION"),
            expint_core: expint_core::VERSION,
        }
    }
}

/// Everything needed to re-run a command. The wall time makes this the only
/// output that differs between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub rerun: String,
    pub config: &'a RunConfig,
    pub versions: Versions,
    pub wall_time_s: f64,
    pub gates: &'a [Gate],
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport<'a> {
    pub kind: &'a str,
    pub message: String,
    pub exit_code: i32,
}

impl<'a> ErrorReport<'a> {
    pub fn new(err: &'a LabError) -> Self {
        Self {
            kind: err.kind(),
            message: err.to_string(),
            exit_code: err.exit_code(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            if x != 0.0 {
                let digits = s.split('e').next().unwrap().replace(['-', '.'], "");
                assert_eq!(digits.len(), 17);
            }
        }
    }

    #[test]
    fn writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(&dir.path().join("nested")).unwrap();
        out.write_csv("a.csv", &["x", "y"], vec![vec![fmt_f64(1.0), fmt_f64(2.0)]])
            .unwrap();
        out.write_json("b.json", &serde_json::json!({"k": 1})).unwrap();
        assert_eq!(out.files(), ["a.csv", "b.json"]);
        let csv = fs::read_to_string(out.root().join("a.csv")).unwrap();
        assert_eq!(csv, "x,y\n1.0000000000000000e0,2.0000000000000000e0\n");
    }
}
