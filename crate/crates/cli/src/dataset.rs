//! CSV ingestion into rectangular numeric columns.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Columns replaced by their natural logarithm.
    pub log_columns: Vec<String>,
    /// Text column carrying observation identifiers; kept out of the
    /// numeric columns.
    pub label_column: Option<String>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self { delimiter: b',', has_header: true, log_columns: Vec::new(), label_column: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub path: String,
    /// Hex SHA-256 of the raw file bytes.
    pub sha256: String,
    pub rows: usize,
    pub dropped_rows: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    /// One identifier per row: the label column if given, otherwise the
    /// 1-based data row number.
    pub labels: Vec<String>,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn nrows(&self) -> usize {
        self.provenance.rows
    }

    pub fn column(&self, name: &str) -> Result<&[f64], CliError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|j| self.columns[j].as_slice())
            .ok_or_else(|| CliError::Usage(format!("no column named '{name}' (have: {})", self.names.join(", "))))
    }
}

pub fn ingest_csv(path: &Path, options: &CsvOptions) -> Result<Dataset, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    ingest_bytes(&bytes, &path.display().to_string(), options)
}

pub fn ingest_bytes(bytes: &[u8], source: &str, options: &CsvOptions) -> Result<Dataset, CliError> {
    let sha256 = hex::encode(Sha256::digest(bytes));
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let data_err = |e: csv::Error| CliError::Data(format!("{source}: {e}"));
    let records: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().map_err(data_err)?;
    let width = if options.has_header {
        reader.headers().map_err(data_err)?.len()
    } else {
        records.iter().map(|r| r.len()).max().unwrap_or(0)
    };
    let all_names: Vec<String> = if options.has_header {
        reader.headers().map_err(data_err)?.iter().map(str::to_owned).collect()
    } else {
        (1..=width).map(|j| format!("col{j}")).collect()
    };

    let label_idx = match &options.label_column {
        Some(name) => Some(
            all_names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| CliError::Usage(format!("no label column named '{name}'")))?,
        ),
        None => None,
    };

    // a column in which no cell parses is text and is left out
    let parses = |j: usize| records.iter().any(|r| r.get(j).is_some_and(|c| c.parse::<f64>().is_ok()));
    let numeric: Vec<usize> = (0..width).filter(|&j| Some(j) != label_idx && parses(j)).collect();
    if numeric.is_empty() {
        return Err(CliError::Data(format!("{source}: no numeric columns")));
    }
    let names: Vec<String> = numeric.iter().map(|&j| all_names[j].clone()).collect();
    if let Some(name) = options.log_columns.iter().find(|c| !names.contains(c)) {
        return Err(CliError::Usage(format!("cannot log-transform unknown numeric column '{name}'")));
    }
    let logged: Vec<bool> = names.iter().map(|n| options.log_columns.contains(n)).collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); numeric.len()];
    let mut labels = Vec::new();
    let mut dropped = 0;

    'rows: for (k, rec) in records.iter().enumerate() {
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        let mut row = Vec::with_capacity(numeric.len());
        for &j in &numeric {
            match rec.get(j).and_then(|s| s.parse::<f64>().ok()).filter(|v| v.is_finite()) {
                Some(v) => row.push(v),
                None => {
                    dropped += 1;
                    continue 'rows;
                }
            }
        }
        for (c, v) in row.iter_mut().enumerate() {
            if logged[c] {
                if *v <= 0.0 {
                    return Err(CliError::Data(format!(
                        "{source}: line {line}, column '{}': cannot take the log of {v}",
                        names[c]
                    )));
                }
                *v = v.ln();
            }
        }
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
        labels.push(match label_idx {
            Some(j) => rec.get(j).unwrap_or("").to_owned(),
            None => (labels.len() + 1).to_string(),
        });
    }

    if labels.is_empty() {
        return Err(CliError::Data(format!("{source}: no usable rows")));
    }
    Ok(Dataset {
        names,
        columns,
        provenance: Provenance { path: source.to_owned(), sha256, rows: labels.len(), dropped_rows: dropped },
        labels,
    })
}
