//! Annual time series, aligned climate datasets and the two elementary
//! operators the model is built from: partial sums and first differences.
//!
//! Years are carried as metadata only. All model arithmetic indexes
//! observations by position `t = 1..T`.

use crate::error::{Result, TaolsError};

/// Minimum number of observations in any [`TimeSeries`].
pub const MIN_SERIES_LEN: usize = 2;

/// An annual, equally spaced sequence of finite observations.
///
/// Observation `k` (0-based) belongs to year `start_year + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    start_year: i64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start_year: i64, values: Vec<f64>) -> Result<Self> {
        if values.len() < MIN_SERIES_LEN {
            return Err(TaolsError::SeriesTooShort {
                len: values.len(),
                min: MIN_SERIES_LEN,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(TaolsError::NonFinite { index });
        }
        Ok(Self { start_year, values })
    }

    pub fn start_year(&self) -> i64 {
        self.start_year
    }

    pub fn end_year(&self) -> i64 {
        self.start_year + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always `false`; a valid series holds at least two values.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.values.len() as i64).map(move |k| self.start_year + k)
    }

    /// Value observed in `year`, if the year is covered.
    pub fn at_year(&self, year: i64) -> Option<f64> {
        let offset = year.checked_sub(self.start_year)?;
        usize::try_from(offset).ok().and_then(|k| self.values.get(k).copied())
    }

    /// Elementwise `a * self + b * other`; both series must be aligned.
    pub fn linear_combination(&self, a: f64, other: &TimeSeries, b: f64) -> Result<TimeSeries> {
        ensure_aligned(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        TimeSeries::new(self.start_year, values)
    }

    pub fn scaled(&self, c: f64) -> TimeSeries {
        TimeSeries {
            start_year: self.start_year,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// Sub-series covering `first..=last` (inclusive years).
    pub fn slice_years(&self, first: i64, last: i64) -> Result<TimeSeries> {
        if first < self.start_year || last > self.end_year() || first > last {
            return Err(TaolsError::Misaligned(format!(
                "years {first}..={last} not within {}..={}",
                self.start_year,
                self.end_year()
            )));
        }
        let lo = (first - self.start_year) as usize;
        let hi = (last - self.start_year) as usize;
        TimeSeries::new(first, self.values[lo..=hi].to_vec())
    }
}

pub(crate) fn ensure_aligned(a: &TimeSeries, b: &TimeSeries) -> Result<()> {
    if a.start_year != b.start_year || a.len() != b.len() {
        return Err(TaolsError::Misaligned(format!(
            "{}..={} vs {}..={}",
            a.start_year,
            a.end_year(),
            b.start_year,
            b.end_year()
        )));
    }
    Ok(())
}

/// Forcing (W/m²) and temperature anomaly (°C) over a common year range.
#[derive(Clone, Debug, PartialEq)]
pub struct ClimateDataset {
    forcing: TimeSeries,
    temperature: TimeSeries,
    label: String,
}

impl ClimateDataset {
    pub fn new(forcing: TimeSeries, temperature: TimeSeries, label: impl Into<String>) -> Result<Self> {
        ensure_aligned(&forcing, &temperature)?;
        Ok(Self {
            forcing,
            temperature,
            label: label.into(),
        })
    }

    pub fn forcing(&self) -> &TimeSeries {
        &self.forcing
    }

    pub fn temperature(&self) -> &TimeSeries {
        &self.temperature
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of observations `T`.
    pub fn len(&self) -> usize {
        self.forcing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forcing.is_empty()
    }

    pub fn start_year(&self) -> i64 {
        self.forcing.start_year()
    }

    pub fn end_year(&self) -> i64 {
        self.forcing.end_year()
    }
}

/// Partial sums `X_t = x_1 + ... + x_t`, summed left to right.
pub fn partial_sums(x: &[f64]) -> Vec<f64> {
    x.iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

pub fn cumulative_sum(x: &TimeSeries) -> TimeSeries {
    TimeSeries {
        start_year: x.start_year,
        values: partial_sums(&x.values),
    }
}

/// How the undefined difference at the first observation is handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InitialDifference {
    /// Keep all `T` rows and set `Δx_1 = 0`.
    #[default]
    Zero,
    /// Drop the first observation; the result starts one year later.
    Drop,
}

/// First differences under an explicit convention for `t = 1`.
pub fn difference_with(x: &TimeSeries, initial: InitialDifference) -> Result<TimeSeries> {
    let diffs = x.values.windows(2).map(|w| w[1] - w[0]);
    match initial {
        InitialDifference::Zero => Ok(TimeSeries {
            start_year: x.start_year,
            values: std::iter::once(0.0).chain(diffs).collect(),
        }),
        InitialDifference::Drop => TimeSeries::new(x.start_year + 1, diffs.collect()),
    }
}

/// `Δx_t = x_t - x_{t-1}` with `Δx_1 = 0`; length is preserved.
pub fn first_difference(x: &TimeSeries) -> TimeSeries {
    difference_with(x, InitialDifference::Zero).expect("zero convention keeps the length")
}
