//! Delimited-text ingestion: header row, one numeric response column, every
//! other column a covariate.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use novas_core::{Dataset, Error as CoreError};

use crate::error::CliError;

#[derive(Debug)]
pub struct Table {
    pub headers: Vec<String>,
    /// Row-major cell values.
    pub rows: Vec<Vec<f64>>,
}

pub struct Ingested {
    pub dataset: Dataset,
    pub covariate_names: Vec<String>,
    pub response_name: String,
}

/// Picks comma or tab from the header line; anything else must be given
/// explicitly.
pub fn detect_delimiter(header: &str) -> Result<u8, CliError> {
    match (header.contains(','), header.contains('\t')) {
        (true, false) => Ok(b','),
        (false, true) => Ok(b'\t'),
        (true, true) => Err(CliError::Input(
            "header contains both commas and tabs; pass --delimiter".into(),
        )),
        (false, false) => Err(CliError::Input(
            "cannot detect a comma or tab delimiter in the header; pass --delimiter".into(),
        )),
    }
}

pub fn parse_delimiter(spec: &str) -> Result<u8, CliError> {
    match spec {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        "comma" | "," => Ok(b','),
        s if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        s => Err(CliError::Config(format!(
            "delimiter must be a single ASCII character, got '{s}'"
        ))),
    }
}

pub fn read_table(path: &Path, delimiter: Option<u8>) -> Result<Table, CliError> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_table(&text, delimiter)
}

pub fn parse_table(text: &str, delimiter: Option<u8>) -> Result<Table, CliError> {
    let header_line = text.lines().next().unwrap_or_default();
    if header_line.trim().is_empty() {
        return Err(CliError::Input(
            "input is empty or has no header row".into(),
        ));
    }
    let delimiter = match delimiter {
        Some(d) => d,
        None => detect_delimiter(header_line)?,
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Input(format!("bad header row: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        // Line numbers count the header as line 1.
        let line = r + 2;
        let record = record.map_err(|e| CliError::Input(format!("line {line}: {e}")))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        CliError::Input(format!(
                            "line {line}, column {} ('{}'): '{cell}' is not a finite number",
                            c + 1,
                            headers[c]
                        ))
                    })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    Ok(Table { headers, rows })
}

/// Resolves `response` as a header name, else a 1-based column number;
/// `None` selects the last column.
pub fn response_column(headers: &[String], response: Option<&str>) -> Result<usize, CliError> {
    let Some(spec) = response else {
        return Ok(headers.len() - 1);
    };
    if let Some(c) = headers.iter().position(|h| h == spec) {
        return Ok(c);
    }
    match spec.parse::<usize>() {
        Ok(k) if (1..=headers.len()).contains(&k) => Ok(k - 1),
        _ => Err(CliError::Input(format!(
            "response column '{spec}' not found in header"
        ))),
    }
}

/// Splits the table into covariates and response, standardizing covariates.
pub fn ingest(
    path: &Path,
    response: Option<&str>,
    delimiter: Option<u8>,
) -> Result<Ingested, CliError> {
    let table = read_table(path, delimiter)?;
    into_dataset(table, response)
}

pub fn into_dataset(table: Table, response: Option<&str>) -> Result<Ingested, CliError> {
    let Table { headers, rows } = table;
    if headers.len() < 2 {
        return Err(CliError::Input(
            "need a response column and at least one covariate".into(),
        ));
    }
    let target = response_column(&headers, response)?;
    let covariate_cols: Vec<usize> = (0..headers.len()).filter(|&c| c != target).collect();
    let x_rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| covariate_cols.iter().map(|&c| row[c]).collect())
        .collect();
    let y: Vec<f64> = rows.iter().map(|row| row[target]).collect();
    let covariate_names: Vec<String> = covariate_cols.iter().map(|&c| headers[c].clone()).collect();
    let raw = Dataset::from_rows(&x_rows, y).map_err(|e| CliError::Input(e.to_string()))?;
    let dataset = raw.standardize().map_err(|e| match e {
        CoreError::ConstantColumn(j) => CliError::Input(format!(
            "column {} ('{}') is constant; drop it before selection",
            covariate_cols[j] + 1,
            covariate_names[j]
        )),
        other => CliError::Input(other.to_string()),
    })?;
    Ok(Ingested {
        dataset,
        covariate_names,
        response_name: headers[target].clone(),
    })
}
