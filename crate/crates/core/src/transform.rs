//! Low-frequency sine basis and the projection of series onto it.
//!
//! The basis functions are `φ_i(r) = √2 sin((i - ½) π r)` for `i = 1..K`.
//! A series `x_1..x_T` is mapped to the `K` coefficients
//!
//! ```text
//! V_{x,i} = (1/√T) Σ_{t=1..T} x_t φ_i(t/T)
//! ```
//!
//! with evaluation points `t/T`, so `r = 1` is included and `r = 0` is not.
//! Coefficient `i` depends only on `i` and `T`, never on `K`; a system built
//! at a large `K` therefore contains every smaller system as its leading rows.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Result, TaolsError};
use crate::series::{cumulative_sum, first_difference, ClimateDataset, TimeSeries};

/// Number of regressors in the transformed regression.
pub const NUM_REGRESSORS: usize = 5;

/// Regressor columns of a [`TransformedSystem`], in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regressor {
    Constant,
    Trend,
    CumulativeTemperature,
    Temperature,
    TemperatureChange,
}

impl Regressor {
    pub const ALL: [Regressor; NUM_REGRESSORS] = [
        Regressor::Constant,
        Regressor::Trend,
        Regressor::CumulativeTemperature,
        Regressor::Temperature,
        Regressor::TemperatureChange,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Regressor::Constant => "constant",
            Regressor::Trend => "trend",
            Regressor::CumulativeTemperature => "cumulative temperature",
            Regressor::Temperature => "temperature",
            Regressor::TemperatureChange => "temperature change",
        }
    }
}

/// `√2 sin((i - ½) π r)` for `i >= 1` and `r ∈ [0, 1]`.
pub fn basis_fn(i: usize, r: f64) -> Result<f64> {
    if i < 1 {
        return Err(TaolsError::BasisIndex(i));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(TaolsError::BasisArgument(r));
    }
    Ok(basis_unchecked(i, r))
}

#[inline]
fn basis_unchecked(i: usize, r: f64) -> f64 {
    SQRT_2 * ((i as f64 - 0.5) * PI * r).sin()
}

/// Number of basis functions used in a transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    k: usize,
}

impl BasisSpec {
    /// Checks `1 <= K <= T`. The estimator imposes its own lower bound.
    pub fn new(k: usize, t: usize) -> Result<Self> {
        if k < 1 {
            return Err(TaolsError::BasisIndex(k));
        }
        if k > t {
            return Err(TaolsError::OverResolution { k, t });
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// `φ_i(t/T)` tabulated for `i = 1..K`, `t = 1..T`, row-major by `i`.
#[derive(Clone, Debug)]
pub struct BasisMatrix {
    k: usize,
    t: usize,
    values: Vec<f64>,
}

impl BasisMatrix {
    pub fn new(k: usize, t: usize) -> Result<Self> {
        BasisSpec::new(k, t)?;
        let tf = t as f64;
        let mut values = Vec::with_capacity(k * t);
        for i in 1..=k {
            values.extend((1..=t).map(|s| basis_unchecked(i, s as f64 / tf)));
        }
        Ok(Self { k, t, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[(i - 1) * self.t..i * self.t]
    }

    /// Projects `x` (length `T`) onto every basis function. Each coefficient
    /// is summed in the fixed order `t = 1..T`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.t, "series length must match the basis");
        let scale = 1.0 / (self.t as f64).sqrt();
        (1..=self.k)
            .map(|i| {
                let dot: f64 = self.row(i).iter().zip(x).map(|(b, v)| b * v).sum();
                scale * dot
            })
            .collect()
    }
}

/// The first `K` basis coefficients of `x`.
pub fn transform_series(x: &TimeSeries, k: usize) -> Result<Vec<f64>> {
    Ok(BasisMatrix::new(k, x.len())?.project(x.values()))
}

/// Transformed response and regressors of the augmented regression.
///
/// Row `i - 1` holds basis coefficient `i`. Columns follow
/// [`Regressor::ALL`]: transformed constant, transformed trend `t = 1..T`,
/// transformed cumulative temperature, transformed temperature and
/// transformed temperature change.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformedSystem {
    response: Vec<f64>,
    regressors: Vec<[f64; NUM_REGRESSORS]>,
    t: usize,
}

impl TransformedSystem {
    /// Assembles a system from precomputed columns. All columns must have
    /// the same length `K >= 1`.
    pub fn from_parts(response: Vec<f64>, regressors: Vec<[f64; NUM_REGRESSORS]>, t: usize) -> Result<Self> {
        if response.len() != regressors.len() {
            return Err(TaolsError::Misaligned(format!(
                "response has {} rows, regressors {}",
                response.len(),
                regressors.len()
            )));
        }
        BasisSpec::new(response.len(), t)?;
        Ok(Self {
            response,
            regressors,
            t,
        })
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn regressors(&self) -> &[[f64; NUM_REGRESSORS]] {
        &self.regressors
    }

    pub fn column(&self, which: Regressor) -> Vec<f64> {
        self.regressors.iter().map(|row| row[which.index()]).collect()
    }

    pub fn k(&self) -> usize {
        self.response.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// The system restricted to the first `k` basis functions.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k < 1 || k > self.k() {
            return Err(TaolsError::InvalidGrid(format!(
                "cannot truncate a K = {} system to K = {k}",
                self.k()
            )));
        }
        Ok(Self {
            response: self.response[..k].to_vec(),
            regressors: self.regressors[..k].to_vec(),
            t: self.t,
        })
    }
}

/// Builds the transformed regression of cumulative forcing on a constant,
/// a linear trend, cumulative temperature, temperature and its first
/// difference.
pub fn build_transformed_system(dataset: &ClimateDataset, k: usize) -> Result<TransformedSystem> {
    let t = dataset.len();
    let basis = BasisMatrix::new(k, t)?;

    let temperature = dataset.temperature();
    let constant = vec![1.0; t];
    let trend: Vec<f64> = (1..=t).map(|s| s as f64).collect();
    let cum_forcing = cumulative_sum(dataset.forcing());
    let cum_temperature = cumulative_sum(temperature);
    let temperature_change = first_difference(temperature);

    let columns = [
        basis.project(&constant),
        basis.project(&trend),
        basis.project(cum_temperature.values()),
        basis.project(temperature.values()),
        basis.project(temperature_change.values()),
    ];
    let regressors = (0..k).map(|i| std::array::from_fn(|j| columns[j][i])).collect();

    Ok(TransformedSystem {
        response: basis.project(cum_forcing.values()),
        regressors,
        t,
    })
}
