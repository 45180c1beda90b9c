use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use ndarray::Array2;
use serde::Deserialize;

use super::{CliError, CliResult};
use crate::stats::Bounds;

/// A CSV table held as strings; columns are parsed on demand.
pub(crate) struct Dataset {
    headers: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl Dataset {
    pub fn read(input: &str) -> CliResult<Self> {
        let text = if input == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Data(format!("cannot read stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(input)
                .map_err(|e| CliError::Data(format!("cannot read {input}: {e}")))?
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| CliError::Data(format!("bad CSV header: {e}")))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let rows = reader
            .records()
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Data(format!("bad CSV record: {e}")))?;
        Ok(Self { headers, rows })
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    fn index(&self, name: &str) -> CliResult<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("column '{name}' not found")))
    }

    pub fn strings(&self, name: &str) -> CliResult<Vec<String>> {
        let j = self.index(name)?;
        Ok(self
            .rows
            .iter()
            .map(|r| r.get(j).unwrap_or("").trim().to_string())
            .collect())
    }

    pub fn numeric(&self, name: &str) -> CliResult<Vec<f64>> {
        let j = self.index(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let raw = r.get(j).unwrap_or("").trim();
                match raw.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(CliError::Data(format!(
                        "column '{name}', row {}: '{raw}' is not a finite number",
                        i + 1
                    ))),
                }
            })
            .collect()
    }

    pub fn matrix(&self, names: &[String]) -> CliResult<Array2<f64>> {
        let cols = names
            .iter()
            .map(|n| self.numeric(n))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Array2::from_shape_fn((self.rows.len(), names.len()), |(i, j)| cols[j][i]))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum BoundsEntry {
    Range { lower: f64, upper: f64 },
    Categories { categories: Vec<String> },
}

/// Bounds manifest: column name to a numeric range or a category list. A
/// `y` entry, when present, bounds the response of a regression.
pub(crate) struct BoundsFile {
    entries: BTreeMap<String, BoundsEntry>,
}

impl BoundsFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        let entries = serde_json::from_str(&text)
            .map_err(|e| CliError::Data(format!("bad bounds file {}: {e}", path.display())))?;
        Ok(Self { entries })
    }

    pub fn load_required(path: Option<&Path>) -> CliResult<Self> {
        match path {
            Some(p) => Self::load(p),
            None => Err(CliError::Usage("--bounds-file is required".into())),
        }
    }

    pub fn range(&self, column: &str) -> CliResult<Bounds> {
        match self.entries.get(column) {
            Some(BoundsEntry::Range { lower, upper }) => {
                Ok(Bounds::new(*lower, *upper).map_err(|e| CliError::Data(format!("{column}: {e}")))?)
            }
            Some(BoundsEntry::Categories { .. }) => Err(CliError::Data(format!(
                "column '{column}' is declared categorical, not numeric"
            ))),
            None => Err(CliError::Data(format!("no bounds declared for column '{column}'"))),
        }
    }

    pub fn ranges(&self, columns: &[String]) -> CliResult<Vec<Bounds>> {
        columns.iter().map(|c| self.range(c)).collect()
    }

    /// Response bounds: the label column's entry, else `y`.
    pub fn response(&self, label: &str) -> CliResult<Bounds> {
        if self.entries.contains_key(label) {
            self.range(label)
        } else {
            self.range("y")
        }
    }

    pub fn categories(&self, column: &str) -> CliResult<Vec<String>> {
        match self.entries.get(column) {
            Some(BoundsEntry::Categories { categories }) if !categories.is_empty() => {
                Ok(categories.clone())
            }
            _ => Err(CliError::Data(format!(
                "no category list declared for column '{column}'"
            ))),
        }
    }
}
