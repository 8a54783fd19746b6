//! Rectangular numeric result tables and their CSV form.
//!
//! CSV conventions: `#`-prefixed metadata lines, a header row, then one row
//! per grid point with floats at 17 significant digits. Re-running an
//! experiment with the same config and seed reproduces the file byte for
//! byte except for the timestamp line.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

/// Provenance recorded at the top of every CSV.
#[derive(Debug, Clone)]
pub struct TableMetadata {
    pub experiment: String,
    pub config_hash: String,
    pub version: String,
    pub seed: u64,
    pub timestamp: String,
}

impl TableMetadata {
    pub fn new(experiment: &str, config_hash: &str, seed: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            config_hash: config_hash.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: TableMetadata,
}

impl ResultTable {
    pub fn new(name: &str, columns: &[&str], metadata: TableMetadata) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len(), "ragged row");
        self.rows.push(row);
    }

    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of one column.
    pub fn column_values(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema: qreach-result-v1");
        let _ = writeln!(out, "# experiment = {}", self.metadata.experiment);
        let _ = writeln!(out, "# table = {}", self.name);
        let _ = writeln!(out, "# config_hash = {}", self.metadata.config_hash);
        let _ = writeln!(out, "# version = {}", self.metadata.version);
        let _ = writeln!(out, "# seed = {}", self.metadata.seed);
        let _ = writeln!(out, "# timestamp = {}", self.metadata.timestamp);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv_string().as_bytes())
    }
}

/// 17 significant digits in scientific notation; round-trips any f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Strips the volatile timestamp line; what remains must be byte-identical
/// across reruns of the same config and seed.
pub fn stable_csv_content(csv: &str) -> String {
    csv.lines()
        .filter(|line| !line.starts_with("# timestamp"))
        .collect::<Vec<_>>()
        .join("\n")
}
