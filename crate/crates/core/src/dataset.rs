//! Subject records and the combined RCT + external-control dataset.
//!
//! A [`CombinedDataset`] is the validated, immutable input to every other
//! stage. Record order is preserved so per-subject weights and propensity
//! scores can be joined back to input rows by index.

use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// One observed subject: outcome, treatment, data source and covariates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubjectRecord {
    /// Observed outcome.
    pub y: f64,
    /// Treatment indicator (true = treated).
    pub a: bool,
    /// Source indicator (true = RCT, false = external control).
    pub z: bool,
    /// Covariate vector.
    pub x: Vec<f64>,
}

impl SubjectRecord {
    pub fn new(y: f64, a: bool, z: bool, x: Vec<f64>) -> Self {
        Self { y, a, z, x }
    }

    pub fn group(&self) -> Group {
        match (self.z, self.a) {
            (true, true) => Group::RctTreated,
            (true, false) => Group::RctControl,
            (false, _) => Group::ExternalControl,
        }
    }
}

/// The three estimation arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    RctTreated,
    RctControl,
    ExternalControl,
}

impl Group {
    pub fn label(self) -> &'static str {
        match self {
            Group::RctTreated => "rct_treated",
            Group::RctControl => "rct_control",
            Group::ExternalControl => "ec",
        }
    }
}

/// Validated collection of RCT and external-control subjects.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedDataset {
    records: Vec<SubjectRecord>,
    covariate_names: Vec<String>,
    n11: usize,
    n10: usize,
    n2: usize,
}

impl CombinedDataset {
    /// Validates `records` and computes arm counts.
    ///
    /// Requires at least one RCT-treated subject and at least one control
    /// (concurrent or external). External controls must have `a = 0`.
    pub fn new(records: Vec<SubjectRecord>) -> Result<Self> {
        let p = records.first().ok_or(Error::EmptyInput)?.x.len();
        let names = (1..=p).map(|j| format!("x{j}")).collect();
        Self::with_names(records, names)
    }

    /// Like [`CombinedDataset::new`] but with explicit covariate names.
    pub fn with_names(records: Vec<SubjectRecord>, covariate_names: Vec<String>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyInput);
        }
        let p = covariate_names.len();
        let (mut n11, mut n10, mut n2) = (0, 0, 0);
        for (index, r) in records.iter().enumerate() {
            if r.x.len() != p {
                return Err(Error::InconsistentDimension {
                    index,
                    expected: p,
                    found: r.x.len(),
                });
            }
            if !r.y.is_finite() || r.x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            match r.group() {
                Group::RctTreated => n11 += 1,
                Group::RctControl => n10 += 1,
                Group::ExternalControl if r.a => return Err(Error::EcTreatedSubject { index }),
                Group::ExternalControl => n2 += 1,
            }
        }
        if n11 == 0 || n10 + n2 == 0 {
            return Err(Error::DegenerateArms {
                n11,
                n_controls: n10 + n2,
            });
        }
        Ok(Self {
            records,
            covariate_names,
            n11,
            n10,
            n2,
        })
    }

    pub fn records(&self) -> &[SubjectRecord] {
        &self.records
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.covariate_names
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Covariate dimension.
    pub fn dim(&self) -> usize {
        self.covariate_names.len()
    }

    pub fn n11(&self) -> usize {
        self.n11
    }

    pub fn n10(&self) -> usize {
        self.n10
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// RCT sample size.
    pub fn n1(&self) -> usize {
        self.n11 + self.n10
    }

    /// Mixture proportion: the RCT share of the pooled sample.
    pub fn lambda(&self) -> f64 {
        self.n1() as f64 / self.len() as f64
    }

    pub fn covariate_index(&self, name: &str) -> Option<usize> {
        self.covariate_names.iter().position(|n| n == name)
    }

    /// Writes the dataset as CSV with columns `y,a,z,<covariates>`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["y".to_string(), "a".into(), "z".into()];
        header.extend(self.covariate_names.iter().cloned());
        w.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![
                fmt_f64(r.y),
                u8::from(r.a).to_string(),
                u8::from(r.z).to_string(),
            ];
            row.extend(r.x.iter().map(|v| fmt_f64(*v)));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn export_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Maps CSV header names onto record fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub y: String,
    pub a: String,
    pub z: String,
    /// Covariate columns in order; `None` takes every column not otherwise
    /// mapped or listed in `exclude`.
    pub covariates: Option<Vec<String>>,
    pub exclude: Vec<String>,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            y: "y".into(),
            a: "a".into(),
            z: "z".into(),
            covariates: None,
            exclude: Vec::new(),
        }
    }
}

/// Reads a dataset from a CSV file.
pub fn ingest_csv(path: impl AsRef<Path>, columns: &ColumnMap) -> Result<CombinedDataset> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    read_csv(std::fs::File::open(path)?, columns)
}

/// Reads a dataset from any CSV source. Data rows are numbered from 1 in errors.
pub fn read_csv<R: Read>(reader: R, columns: &ColumnMap) -> Result<CombinedDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let (iy, ia, iz) = (find(&columns.y)?, find(&columns.a)?, find(&columns.z)?);
    let cov_names: Vec<String> = match &columns.covariates {
        Some(names) => names.clone(),
        None => headers
            .iter()
            .filter(|h| {
                *h != columns.y
                    && *h != columns.a
                    && *h != columns.z
                    && !columns.exclude.iter().any(|e| e == h)
            })
            .map(str::to_string)
            .collect(),
    };
    let cov_idx = cov_names
        .iter()
        .map(|n| find(n))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 1;
        let y = parse_real(&row, iy, line, &columns.y)?;
        let a = parse_indicator(&row, ia, line, &columns.a)?;
        let z = parse_indicator(&row, iz, line, &columns.z)?;
        let x = cov_idx
            .iter()
            .zip(&cov_names)
            .map(|(&j, name)| parse_real(&row, j, line, name))
            .collect::<Result<Vec<_>>>()?;
        records.push(SubjectRecord { y, a, z, x });
    }
    CombinedDataset::with_names(records, cov_names)
}

/// Reads one numeric column (for example externally supplied propensity scores).
pub fn read_numeric_column(path: impl AsRef<Path>, column: &str) -> Result<Vec<f64>> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)?;
    let idx = rdr
        .headers()?
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| Error::MissingColumn(column.to_string()))?;
    rdr.records()
        .enumerate()
        .map(|(i, row)| parse_real(&row?, idx, i + 1, column))
        .collect()
}

fn cell<'a>(row: &'a csv::StringRecord, idx: usize, line: usize, column: &str) -> Result<&'a str> {
    match row.get(idx) {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err(Error::ParseError {
            row: line,
            column: column.to_string(),
            message: "missing value".into(),
        }),
    }
}

fn parse_real(row: &csv::StringRecord, idx: usize, line: usize, column: &str) -> Result<f64> {
    let s = cell(row, idx, line, column)?;
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::ParseError {
            row: line,
            column: column.to_string(),
            message: format!("`{s}` is not a finite number"),
        }),
    }
}

fn parse_indicator(row: &csv::StringRecord, idx: usize, line: usize, column: &str) -> Result<bool> {
    let s = cell(row, idx, line, column)?;
    match s.parse::<f64>() {
        Ok(0.0) => Ok(false),
        Ok(1.0) => Ok(true),
        _ => Err(Error::ParseError {
            row: line,
            column: column.to_string(),
            message: format!("`{s}` is not 0 or 1"),
        }),
    }
}
