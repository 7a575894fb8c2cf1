//! CSV-serializable result tables with a provenance header.

use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// Rows of an experiment output plus the `# key=value` header block that
/// makes the run reconstructible from the file alone.
#[derive(Debug, Clone)]
pub struct ResultTable {
    /// File stem used when the table is written to a directory.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub provenance: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        ResultTable {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn annotate(&mut self, key: &str, value: String) {
        self.provenance.push((key.to_string(), value));
    }

    pub fn annotate_all(&mut self, pairs: &[(String, String)]) {
        self.provenance.extend_from_slice(pairs);
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (k, v) in &self.provenance {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("tables are ASCII")
    }

    pub fn write_to_dir(&self, dir: &Path) -> Result<std::path::PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.csv", self.name));
        let file = std::fs::File::create(&path)?;
        self.write(std::io::BufWriter::new(file))?;
        Ok(path)
    }
}

/// Scientific-notation formatting used across all result tables; shortest
/// round-trip representation, deterministic for identical inputs.
pub fn fmt(v: f64) -> String {
    format!("{v:e}")
}

/// Full-precision formatting (17 significant digits) for field values.
pub fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}
