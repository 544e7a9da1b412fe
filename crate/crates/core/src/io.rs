//! Sample matrices as CSV: one row per observation, optional header row of
//! node labels.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A sample matrix with optional column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub data: DMatrix<f64>,
    pub labels: Option<Vec<String>>,
}

pub fn read_samples<R: Read>(reader: R, header: bool) -> Result<Samples> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let labels = if header {
        Some(rdr.headers()?.iter().map(str::to_owned).collect::<Vec<_>>())
    } else {
        None
    };
    let mut values = Vec::new();
    let mut width = labels.as_ref().map(Vec::len);
    let mut rows = 0;
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let line = idx + 1 + usize::from(header);
        match width {
            Some(w) if w != record.len() => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {w} fields, found {}", record.len()),
                })
            }
            None => width = Some(record.len()),
            _ => {}
        }
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("not a number: {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("non-finite value {field:?}"),
                });
            }
            values.push(v);
        }
        rows += 1;
    }
    let width = width.unwrap_or(0);
    if rows == 0 || width == 0 {
        return Err(Error::InvalidInput("no observations in sample file".into()));
    }
    Ok(Samples {
        data: DMatrix::from_row_slice(rows, width, &values),
        labels,
    })
}

pub fn read_samples_path(path: impl AsRef<Path>, header: bool) -> Result<Samples> {
    read_samples(std::fs::File::open(path)?, header)
}

pub fn write_samples<W: Write>(
    writer: W,
    data: &DMatrix<f64>,
    labels: Option<&[String]>,
) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    if let Some(labels) = labels {
        if labels.len() != data.ncols() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} columns",
                labels.len(),
                data.ncols()
            )));
        }
        wtr.write_record(labels)?;
    }
    for row in data.row_iter() {
        wtr.write_record(row.iter().map(|v| format!("{v:?}")))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_samples_path(
    path: impl AsRef<Path>,
    data: &DMatrix<f64>,
    labels: Option<&[String]>,
) -> Result<()> {
    write_samples(
        std::io::BufWriter::new(std::fs::File::create(path)?),
        data,
        labels,
    )
}
