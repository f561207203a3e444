//! Discrete data sets `(x_i, f_i)`, `i = 0..=mu+1`, and their CSV form.
//!
//! The CSV format has two numeric columns `x,f`, an optional single header
//! line, and LF or CRLF line endings. Abscissae must already be strictly
//! increasing; unordered input is rejected, never sorted.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numfmt::format_g17;

/// Data points with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl DataSet {
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() {
            return Err(Error::LengthMismatch {
                abscissae: xs.len(),
                values: fs.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: xs.len(),
            });
        }
        for (index, (x, f)) in xs.iter().zip(&fs).enumerate() {
            if !x.is_finite() || !f.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        for index in 1..xs.len() {
            if xs[index] == xs[index - 1] {
                return Err(Error::DuplicateAbscissa { index });
            }
            if xs[index] < xs[index - 1] {
                return Err(Error::NonIncreasingAbscissa { index });
            }
        }
        Ok(Self { xs, fs })
    }

    /// Builds a data set from a closure evaluated on the given abscissae.
    pub fn from_fn(xs: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let fs = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, fs)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[f64] {
        &self.fs
    }

    /// Number of points, `mu + 2`.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Number of inner abscissae `x_1..x_mu`.
    pub fn mu(&self) -> usize {
        self.xs.len() - 2
    }

    pub fn x(&self, i: usize) -> f64 {
        self.xs[i]
    }

    pub fn f(&self, i: usize) -> f64 {
        self.fs[i]
    }

    /// Left end of the approximation interval, `x_0`.
    pub fn a(&self) -> f64 {
        self.xs[0]
    }

    /// Right end of the approximation interval, `x_{mu+1}`.
    pub fn b(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Euclidean norm of the value vector.
    pub fn value_norm(&self) -> f64 {
        self.fs.iter().map(|f| f * f).sum::<f64>().sqrt()
    }

    /// Parses CSV text. With `has_header` the first record is skipped.
    pub fn parse_csv(text: &str, has_header: bool) -> Result<Self> {
        let rows = csv_rows(text)?;
        let skip = usize::from(has_header && !rows.is_empty());
        let mut xs = Vec::with_capacity(rows.len());
        let mut fs = Vec::with_capacity(rows.len());
        for (line, record) in &rows[skip..] {
            let (x, f) = parse_row(record, *line)?;
            xs.push(x);
            fs.push(f);
        }
        Self::new(xs, fs)
    }

    /// Parses CSV text, treating the first record as a header when it is not numeric.
    pub fn parse_csv_auto(text: &str) -> Result<Self> {
        let has_header = match csv_rows(text)?.first() {
            Some((line, record)) => parse_row(record, *line).is_err(),
            None => false,
        };
        Self::parse_csv(text, has_header)
    }

    /// Renders the data as `x,f` CSV with a header and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let rows = std::iter::once(["x".to_owned(), "f".to_owned()]).chain(
            self.xs
                .iter()
                .zip(&self.fs)
                .map(|(x, f)| [format_g17(*x), format_g17(*f)]),
        );
        for row in rows {
            w.write_record(&row).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("ASCII output")
    }
}

/// Non-empty records with their 1-based line numbers.
fn csv_rows(text: &str) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows.push((line, record));
    }
    Ok(rows)
}

fn parse_row(record: &csv::StringRecord, line_no: usize) -> Result<(f64, f64)> {
    if record.len() != 2 {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected exactly two columns, found {}", record.len()),
        });
    }
    let parse = |field: &str| -> Result<f64> {
        let value: f64 = field.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("cannot parse {field:?} as a number"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("{field:?} is not finite"),
            });
        }
        Ok(value)
    };
    Ok((parse(&record[0])?, parse(&record[1])?))
}

pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<DataSet> {
    DataSet::parse_csv(&read(path.as_ref())?, has_header)
}

/// Like [`load_csv`] but detects an optional header line.
pub fn load_csv_auto(path: impl AsRef<Path>) -> Result<DataSet> {
    DataSet::parse_csv_auto(&read(path.as_ref())?)
}

pub fn save_csv(path: impl AsRef<Path>, data: &DataSet) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, data.to_csv()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A serial-dilution viability series.
///
/// Dilution `j` exposes germs to `kappa0 * 2^-j`; `viability_percent[j]` is the
/// surviving fraction in percent, for `j = 0..=z`.
#[derive(Debug, Clone, PartialEq)]
pub struct MedicalSeries {
    pub initial_concentration: f64,
    pub viability_percent: Vec<f64>,
}

impl MedicalSeries {
    pub fn new(initial_concentration: f64, viability_percent: Vec<f64>) -> Result<Self> {
        if !(initial_concentration > 0.0 && initial_concentration.is_finite()) {
            return Err(Error::precondition(
                "initial concentration must be positive and finite",
            ));
        }
        Ok(Self {
            initial_concentration,
            viability_percent,
        })
    }

    /// Number of dilution steps `z`.
    pub fn steps(&self) -> usize {
        self.viability_percent.len().saturating_sub(1)
    }

    /// Concentration after `j` halvings; `j` may be fractional.
    pub fn concentration(&self, j: f64) -> f64 {
        self.initial_concentration * (-j).exp2()
    }
}

/// Plots dilution step `j` against viability: abscissae `0, 1, ..., z`.
pub fn medical_to_dataset(series: &MedicalSeries) -> Result<DataSet> {
    if series.viability_percent.len() < 4 {
        return Err(Error::precondition(format!(
            "a dilution series needs z >= 3 steps for a two-knot fit, got z = {}",
            series.steps()
        )));
    }
    let xs = (0..series.viability_percent.len())
        .map(|j| j as f64)
        .collect();
    DataSet::new(xs, series.viability_percent.clone())
}
