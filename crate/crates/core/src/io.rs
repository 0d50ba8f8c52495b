//! CSV ingestion and export for annual climate series.
//!
//! Combined schema (header required, rows ascending by year):
//!
//! ```text
//! year,forcing_wm2,temp_anomaly_c
//! 1850,-0.412,-0.351
//! ```
//!
//! A cell may be left empty at the start or end of a column when one
//! variable covers fewer years than the other; the dataset is trimmed to the
//! years both columns cover. Interior holes are rejected, never interpolated.
//!
//! Two-file mode reads `year,value` files for forcing and temperature and
//! intersects them on year.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Result, TaolsError};
use crate::series::{ClimateDataset, TimeSeries};

pub const YEAR_COLUMN: &str = "year";
pub const FORCING_COLUMN: &str = "forcing_wm2";
pub const TEMPERATURE_COLUMN: &str = "temp_anomaly_c";

/// A dataset together with how many data rows the source contained.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedDataset {
    pub dataset: ClimateDataset,
    pub rows_read: usize,
}

struct Row {
    line: u64,
    year: i64,
    cells: Vec<Option<f64>>,
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| TaolsError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_error(err: csv::Error) -> TaolsError {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    match err.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => TaolsError::MalformedRow {
            line,
            reason: format!("expected {expected_len} fields, found {len}"),
        },
        _ => TaolsError::MalformedRow {
            line,
            reason: err.to_string(),
        },
    }
}

/// Parses a year-indexed table, returning the data rows for `columns`
/// (looked up by header name) in file order.
fn parse_table(bytes: &[u8], columns: &[&str]) -> Result<Vec<Row>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(bytes);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let index_of = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| TaolsError::MissingColumn(name.to_string()))
    };
    let year_idx = index_of(YEAR_COLUMN)?;
    let idx: Vec<usize> = columns.iter().map(|c| index_of(c)).collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let raw_year = &record[year_idx];
        let year = raw_year.parse::<i64>().map_err(|_| TaolsError::NonNumeric {
            line,
            column: YEAR_COLUMN.to_string(),
            value: raw_year.to_string(),
        })?;
        let cells = idx
            .iter()
            .zip(columns)
            .map(|(&i, name)| {
                let raw = &record[i];
                if raw.is_empty() {
                    return Ok(None);
                }
                match raw.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(Some(v)),
                    _ => Err(TaolsError::NonNumeric {
                        line,
                        column: name.to_string(),
                        value: raw.to_string(),
                    }),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(Row { line, year, cells });
    }
    check_years(&rows)?;
    Ok(rows)
}

fn check_years(rows: &[Row]) -> Result<()> {
    for pair in rows.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        if next.year <= prev.year {
            return Err(TaolsError::MalformedRow {
                line: next.line,
                reason: format!(
                    "year {} does not follow {} (rows must be strictly ascending)",
                    next.year, prev.year
                ),
            });
        }
        if next.year > prev.year + 1 {
            return Err(TaolsError::YearGap {
                year: prev.year + 1,
                column: YEAR_COLUMN.to_string(),
            });
        }
    }
    Ok(())
}

/// Extracts the contiguous run of values in column `col`. Empty cells are
/// tolerated only before the first and after the last value.
fn column_series(rows: &[Row], col: usize, name: &str) -> Result<TimeSeries> {
    let first = rows.iter().position(|r| r.cells[col].is_some());
    let last = rows.iter().rposition(|r| r.cells[col].is_some());
    let (first, last) = match (first, last) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(TaolsError::SeriesTooShort { len: 0, min: 2 }),
    };
    let mut values = Vec::with_capacity(last - first + 1);
    for row in &rows[first..=last] {
        match row.cells[col] {
            Some(v) => values.push(v),
            None => {
                return Err(TaolsError::YearGap {
                    year: row.year,
                    column: name.to_string(),
                })
            }
        }
    }
    TimeSeries::new(rows[first].year, values)
}

/// Trims two series to the years both cover.
pub fn intersect(forcing: &TimeSeries, temperature: &TimeSeries, label: &str) -> Result<ClimateDataset> {
    let first = forcing.start_year().max(temperature.start_year());
    let last = forcing.end_year().min(temperature.end_year());
    if first > last {
        return Err(TaolsError::EmptyIntersection);
    }
    ClimateDataset::new(
        forcing.slice_years(first, last)?,
        temperature.slice_years(first, last)?,
        label,
    )
}

/// Parses the combined three-column schema from memory.
pub fn parse_dataset(bytes: &[u8], label: &str) -> Result<LoadedDataset> {
    let rows = parse_table(bytes, &[FORCING_COLUMN, TEMPERATURE_COLUMN])?;
    let forcing = column_series(&rows, 0, FORCING_COLUMN)?;
    let temperature = column_series(&rows, 1, TEMPERATURE_COLUMN)?;
    Ok(LoadedDataset {
        dataset: intersect(&forcing, &temperature, label)?,
        rows_read: rows.len(),
    })
}

pub fn load_dataset(path: &Path) -> Result<LoadedDataset> {
    let bytes = read_bytes(path)?;
    parse_dataset(&bytes, &path.display().to_string())
}

/// Parses a two-column `year,<value>` file. When `value_column` is `None`
/// the second header cell may carry any name.
pub fn parse_series(bytes: &[u8], value_column: Option<&str>) -> Result<(TimeSeries, usize)> {
    let name = match value_column {
        Some(name) => name.to_string(),
        None => {
            let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
            let headers = reader.headers().map_err(csv_error)?;
            match headers.iter().find(|h| *h != YEAR_COLUMN) {
                Some(h) => h.to_string(),
                None => return Err(TaolsError::MissingColumn("value".to_string())),
            }
        }
    };
    let rows = parse_table(bytes, &[name.as_str()])?;
    Ok((column_series(&rows, 0, &name)?, rows.len()))
}

pub fn load_series(path: &Path, value_column: Option<&str>) -> Result<TimeSeries> {
    let bytes = read_bytes(path)?;
    parse_series(&bytes, value_column).map(|(s, _)| s)
}

/// Two-file mode: separate forcing and temperature files intersected on year.
pub fn load_two_files(forcing: &Path, temperature: &Path) -> Result<LoadedDataset> {
    let (f, f_rows) = parse_series(&read_bytes(forcing)?, None)?;
    let (s, s_rows) = parse_series(&read_bytes(temperature)?, None)?;
    let label = format!("{} + {}", forcing.display(), temperature.display());
    Ok(LoadedDataset {
        dataset: intersect(&f, &s, &label)?,
        rows_read: f_rows.max(s_rows),
    })
}

/// Writes the combined schema. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn write_dataset<W: Write>(dataset: &ClimateDataset, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{YEAR_COLUMN},{FORCING_COLUMN},{TEMPERATURE_COLUMN}")?;
    for ((year, f), s) in dataset
        .forcing()
        .years()
        .zip(dataset.forcing().values())
        .zip(dataset.temperature().values())
    {
        writeln!(out, "{year},{f},{s}")?;
    }
    Ok(())
}

pub fn write_series<W: Write>(series: &TimeSeries, value_column: &str, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{YEAR_COLUMN},{value_column}")?;
    for (year, v) in series.years().zip(series.values()) {
        writeln!(out, "{year},{v}")?;
    }
    Ok(())
}
