//! Number formatting, CSV tables and all-or-nothing output directories.

use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Nine significant digits, fixed notation where that stays short.
pub fn fmt9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..=12).contains(&exp) {
        return format!("{v:.8e}");
    }
    let s = format!("{:.*}", (8 - exp).max(0) as usize, v);
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// A CSV table built in memory. The header names each column with its unit.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header.iter().map(AsRef::as_ref)).expect("in-memory write");
        Table { writer }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        self.writer.write_record(cells.iter().map(AsRef::as_ref)).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory flush")
    }
}

/// Files produced by one run, held until everything has been computed.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    /// Writes every file into `dir`. On failure, removes what this call
    /// created, including `dir` itself if it did not exist before.
    pub fn commit(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        let existed = dir.exists();
        let mut written = Vec::new();
        let result = (|| -> std::io::Result<()> {
            std::fs::create_dir_all(dir)?;
            for (name, bytes) in &self.files {
                let p = dir.join(name);
                written.push(p.clone());
                std::fs::write(&p, bytes)?;
            }
            Ok(())
        })();
        match result {
            Ok(()) => Ok(written),
            Err(e) => {
                for p in &written {
                    let _ = std::fs::remove_file(p);
                }
                if !existed {
                    let _ = std::fs::remove_dir_all(dir);
                }
                Err(CliError::io(format!("{}: {e}", dir.display())))
            }
        }
    }
}
