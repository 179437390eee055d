//! Versioned CSV tables.

use crate::CliError;
use std::path::Path;

/// First line of every table written by this crate.
pub const SCHEMA_LINE: &str = "# vslab-schema v1";

/// A header row plus string cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Cells of column `name` parsed as numbers; empty cells become `None`.
    pub fn numbers(&self, name: &str) -> Result<Vec<Option<f64>>, CliError> {
        let c = self.column(name).ok_or_else(|| CliError::Input(format!("missing column {name}")))?;
        self.rows
            .iter()
            .map(|r| {
                let cell = r[c].trim();
                if cell.is_empty() {
                    Ok(None)
                } else {
                    cell.parse::<f64>().map(Some).map_err(|e| CliError::Input(format!("column {name}: {e}")))
                }
            })
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(SCHEMA_LINE.as_bytes());
        out.push(b'\n');
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header).expect("writing to memory");
        for r in &self.rows {
            w.write_record(r).expect("writing to memory");
        }
        w.into_inner().expect("writing to memory")
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.lines().next() != Some(SCHEMA_LINE) {
            return Err(CliError::Input(format!("table does not start with `{SCHEMA_LINE}`")));
        }
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = r
            .headers()
            .map_err(|e| CliError::Input(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(|e| CliError::Input(e.to_string()))?.iter().map(str::to_string).collect());
        }
        Ok(Self { header, rows })
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_bytes()).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Shortest representation that parses back to the same `f64`, in
/// exponent form for very small or very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![num(0.1), opt_num(None)]);
        t.push(vec![num(1e-300), "x,y".into()]);
        assert_eq!(num(2.5e-7), "2.5e-7");
        assert_eq!(num(0.125), "0.125");
        let bytes = t.to_bytes();
        assert!(bytes.starts_with(b"# vslab-schema v1\na,b\n"));
        let back = Table::parse(std::str::from_utf8(&bytes).unwrap()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.numbers("a").unwrap(), vec![Some(0.1), Some(1e-300)]);
        assert!(Table::parse("a,b\n1,2\n").is_err());
    }
}
