// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV datasets and key-value summaries.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::CliError;

/// Round-trip formatting with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    // avoid printing negative zero
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// A table plus `#` metadata lines, kept in memory until written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Dataset {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).map_err(io_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
        Ok(out)
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Column parsed back to numbers; non-numeric cells are skipped.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        match self.column(name) {
            Some(i) => self.rows.iter().filter_map(|r| r[i].parse().ok()).collect(),
            None => Vec::new(),
        }
    }
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Ordered `key = value` lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub entries: Vec<(String, String)>,
}

impl Summary {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut d = Dataset::new(&["x", "y"]);
        d.meta("scenario", "spectrum");
        d.rows.push(vec![fmt_f64(0.1), fmt_f64(1.0 / 3.0)]);
        let text = d.to_csv().unwrap();
        assert_eq!(text, "# scenario = spectrum\nx,y\n1.0000000000000001e-1,3.3333333333333331e-1\n");
        assert_eq!(d.numbers("y"), vec![1.0 / 3.0]);
    }

    #[test]
    fn formatting_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.5e-300, -7.0, std::f64::consts::PI] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
