//! CSV input and output. Every file has a header row; columns are found by
//! name. Complex values are two columns `re,im`, samples `x` (2D: `x,y`),
//! frequencies `omega`, 2D coefficients `row,col,re,im`.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use csv::StringRecord;
use nufft::{ComplexMatrix, Complex64};

use crate::error::CliError;

/// A parsed CSV file with its data rows and their line numbers.
#[derive(Debug)]
pub struct Table {
    path: String,
    headers: StringRecord,
    rows: Vec<(u64, StringRecord)>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let name = path.display().to_string();
        let file = File::open(path).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        Self::from_reader(&name, file)
    }

    pub fn from_reader(name: &str, reader: impl io::Read) -> Result<Self, CliError> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = csv
            .headers()
            .map_err(|e| CliError::Input(format!("{name}: {e}")))?
            .clone();
        let mut rows = Vec::new();
        for record in csv.records() {
            let record = record.map_err(|e| CliError::Input(format!("{name}: {e}")))?;
            let line = record.position().map_or(0, |p| p.line());
            rows.push((line, record));
        }
        if rows.is_empty() {
            return Err(CliError::Input(format!("{name}: no data rows after the header")));
        }
        Ok(Self {
            path: name.to_string(),
            headers,
            rows,
        })
    }

    fn column(&self, name: &str) -> Result<usize, CliError> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Input(format!(
                "{}:1: missing column `{name}` (header is `{}`)",
                self.path,
                self.headers.iter().collect::<Vec<_>>().join(",")
            ))
        })
    }

    fn fail(&self, line: u64, column: &str, value: &str, what: &str) -> CliError {
        CliError::Input(format!(
            "{}:{line}: column `{column}`: cannot read `{value}` as {what}",
            self.path
        ))
    }

    /// Finite reals from column `name`.
    pub fn reals(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let col = self.column(name)?;
        self.rows
            .iter()
            .map(|(line, row)| {
                let raw = &row[col];
                match raw.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(self.fail(*line, name, raw, "a finite number")),
                }
            })
            .collect()
    }

    /// Non-negative integers from column `name`.
    pub fn indices(&self, name: &str) -> Result<Vec<usize>, CliError> {
        let col = self.column(name)?;
        self.rows
            .iter()
            .map(|(line, row)| {
                let raw = &row[col];
                raw.parse::<usize>()
                    .map_err(|_| self.fail(*line, name, raw, "a non-negative integer"))
            })
            .collect()
    }

    /// Complex values from columns `re` and `im`.
    pub fn complex(&self) -> Result<Vec<Complex64>, CliError> {
        let re = self.reals("re")?;
        let im = self.reals("im")?;
        Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
    }

    /// An `m × n` matrix from `row,col,re,im` entries; absent entries are zero.
    /// Without explicit sizes, the largest indices present decide them.
    pub fn matrix(&self, m: Option<usize>, n: Option<usize>) -> Result<ComplexMatrix, CliError> {
        let rows = self.indices("row")?;
        let cols = self.indices("col")?;
        let values = self.complex()?;
        let m = m.unwrap_or_else(|| rows.iter().max().map_or(0, |r| r + 1));
        let n = n.unwrap_or_else(|| cols.iter().max().map_or(0, |c| c + 1));
        if m == 0 || n == 0 {
            return Err(CliError::Input(format!("{}: matrix sizes must be positive", self.path)));
        }
        let mut matrix = ComplexMatrix::zeros(m, n);
        let mut seen = vec![false; m * n];
        for (i, (line, _)) in self.rows.iter().enumerate() {
            let (r, c) = (rows[i], cols[i]);
            if r >= m || c >= n {
                return Err(CliError::Input(format!(
                    "{}:{line}: entry ({r}, {c}) lies outside the {m} x {n} matrix",
                    self.path
                )));
            }
            if std::mem::replace(&mut seen[r * n + c], true) {
                return Err(CliError::Input(format!(
                    "{}:{line}: entry ({r}, {c}) given twice",
                    self.path
                )));
            }
            matrix.set(r, c, values[i]);
        }
        Ok(matrix)
    }
}

pub type CsvOut = csv::Writer<Box<dyn Write>>;

/// CSV writer on `path`, or on standard output.
pub fn writer(path: Option<&PathBuf>) -> Result<CsvOut, CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(
            File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

/// Shortest representation that parses back to the same `f64`.
pub fn real(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_complex(out: &mut CsvOut, values: &[Complex64]) -> Result<(), CliError> {
    out.write_record(["re", "im"])?;
    for z in values {
        out.write_record([real(z.re), real(z.im)])?;
    }
    out.flush()?;
    Ok(())
}
