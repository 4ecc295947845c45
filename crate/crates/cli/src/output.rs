//! CSV rendering and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::CliError;

/// One CSV field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

/// Floats use 17 significant digits, so values survive a text round trip.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A named table with a fixed header, written as `<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<const N: usize>(
        name: impl Into<String>,
        header: [&'static str; N],
        rows: impl IntoIterator<Item = [Cell; N]>,
    ) -> Self {
        Self { name: name.into(), header: header.to_vec(), rows: rows.into_iter().map(|r| r.to_vec()).collect() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => out.push_str(&fmt_float(*x)),
                    Cell::Flag(b) => out.push(if *b { '1' } else { '0' }),
                }
            }
            out.push('\n');
        }
        out
    }

    /// `{"columns": [...], "rows": [[...], ...]}`; non-finite numbers become null.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Num(x) => serde_json::json!(x),
                        Cell::Flag(b) => serde_json::json!(b),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "columns": self.header, "rows": rows })
    }
}

/// Parses a CSV produced by [`Table::to_csv`] back into its header and numeric rows.
#[cfg(test)]
pub fn parse_csv(text: &str) -> Option<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines.next()?.split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse().ok()).collect::<Option<Vec<f64>>>())
        .collect::<Option<_>>()?;
    Some((header, rows))
}

/// Target directory for artifacts; every file lands through a temporary file
/// in the same directory followed by a rename.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let target = self.dir.join(name);
        let io = |source| CliError::Io { path: target.clone(), source };
        let mut tmp = NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(contents.as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&target).map_err(|e| io(e.error))?;
        self.written.push(target.clone());
        Ok(target)
    }

    /// Lists the written files on stderr, keeping stdout for results.
    pub fn report(&self) {
        let mut msg = String::new();
        for p in &self.written {
            let _ = writeln!(msg, "wrote {}", p.display());
        }
        eprint!("{msg}");
    }
}
