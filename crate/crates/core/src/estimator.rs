//! OLS on the transformed system, inference and the K sweep.
//!
//! Estimates `(γ, μ, λ, φ, δ)` in
//!
//! ```text
//! V_{F,i} = γ V_{1,i} + μ V_{t,i} + λ V_{S,i} + φ V_{s,i} + δ V_{Δs,i} + V_{e,i},   i = 1..K
//! ```
//!
//! by Householder QR. The trend column is rescaled to `t/T` before the
//! solve and `μ` is mapped back afterwards; every other estimate is
//! unaffected by that rescaling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Result, TaolsError};
use crate::linalg::qr_least_squares;
use crate::series::ClimateDataset;
use crate::transform::{build_transformed_system, Regressor, TransformedSystem, NUM_REGRESSORS};

/// Smallest admissible `K`: one residual degree of freedom.
pub const MIN_K: usize = NUM_REGRESSORS + 1;

pub const DEFAULT_K_MIN: usize = 10;
pub const DEFAULT_K_MAX: usize = 150;
pub const DEFAULT_LEVEL: f64 = 0.95;

/// A named coefficient of the augmented regression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Gamma,
    Mu,
    Lambda,
    Phi,
    Delta,
}

impl Coefficient {
    pub const ALL: [Coefficient; NUM_REGRESSORS] = [
        Coefficient::Gamma,
        Coefficient::Mu,
        Coefficient::Lambda,
        Coefficient::Phi,
        Coefficient::Delta,
    ];

    pub fn regressor(self) -> Regressor {
        match self {
            Coefficient::Gamma => Regressor::Constant,
            Coefficient::Mu => Regressor::Trend,
            Coefficient::Lambda => Regressor::CumulativeTemperature,
            Coefficient::Phi => Regressor::Temperature,
            Coefficient::Delta => Regressor::TemperatureChange,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coefficient::Gamma => "gamma",
            Coefficient::Mu => "mu",
            Coefficient::Lambda => "lambda",
            Coefficient::Phi => "phi",
            Coefficient::Delta => "delta",
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coefficient {
    type Err = TaolsError;

    fn from_str(s: &str) -> Result<Self> {
        Coefficient::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| TaolsError::UnknownCoefficient(s.to_string()))
    }
}

/// One value per coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Coefficients {
    pub gamma: f64,
    pub mu: f64,
    pub lambda: f64,
    pub phi: f64,
    pub delta: f64,
}

impl Coefficients {
    pub fn get(&self, c: Coefficient) -> f64 {
        self.to_array()[c.regressor().index()]
    }

    pub fn to_array(&self) -> [f64; NUM_REGRESSORS] {
        [self.gamma, self.mu, self.lambda, self.phi, self.delta]
    }

    pub fn from_array(v: [f64; NUM_REGRESSORS]) -> Self {
        Self {
            gamma: v[0],
            mu: v[1],
            lambda: v[2],
            phi: v[3],
            delta: v[4],
        }
    }
}

/// Covariance estimator behind the standard errors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CovarianceKind {
    /// `σ̂² (XᵀX)⁻¹` with `σ̂² = RSS / (K − 5)`.
    #[default]
    Homoskedastic,
    /// Heteroskedasticity-robust sandwich with the `K / (K − 5)` small
    /// sample factor (HC1).
    Robust,
}

impl CovarianceKind {
    pub fn name(self) -> &'static str {
        match self {
            CovarianceKind::Homoskedastic => "homoskedastic",
            CovarianceKind::Robust => "robust (HC1)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl ConfidenceInterval {
    pub fn new(lower: f64, upper: f64, level: f64) -> Result<Self> {
        check_level(level)?;
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(TaolsError::NonPhysical {
                quantity: "interval bounds",
                value: lower,
            });
        }
        Ok(Self { lower, upper, level })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(TaolsError::InvalidLevel(level))
    }
}

/// Two-sided Student-t multiplier `t_{dof, (1 + level)/2}`.
pub fn t_multiplier(dof: usize, level: f64) -> Result<f64> {
    check_level(level)?;
    if dof < 1 {
        return Err(TaolsError::InsufficientK {
            k: dof + NUM_REGRESSORS,
            min: MIN_K,
        });
    }
    let dist = StudentsT::new(0.0, 1.0, dof as f64).expect("dof >= 1 is a valid parameter");
    Ok(dist.inverse_cdf(0.5 * (1.0 + level)))
}

/// Result of one transformed-OLS fit.
#[derive(Clone, Debug, PartialEq)]
pub struct TaolsFit {
    pub estimates: Coefficients,
    pub std_errors: Coefficients,
    pub residual_variance: f64,
    pub rss: f64,
    /// Residuals of the `K` transformed equations.
    pub residuals: Vec<f64>,
    pub k: usize,
    pub t: usize,
    pub dof: usize,
    pub covariance: CovarianceKind,
}

impl TaolsFit {
    pub fn estimate(&self, c: Coefficient) -> f64 {
        self.estimates.get(c)
    }

    pub fn std_error(&self, c: Coefficient) -> f64 {
        self.std_errors.get(c)
    }

    /// `estimate ± t_{dof,(1+level)/2} · se`.
    pub fn confidence_interval(&self, c: Coefficient, level: f64) -> Result<ConfidenceInterval> {
        let m = t_multiplier(self.dof, level)?;
        let (est, se) = (self.estimate(c), self.std_error(c));
        ConfidenceInterval::new(est - m * se, est + m * se, level)
    }
}

/// Looks a coefficient up by name, e.g. `"lambda"`.
pub fn confidence_interval(fit: &TaolsFit, coefficient: &str, level: f64) -> Result<ConfidenceInterval> {
    fit.confidence_interval(coefficient.parse()?, level)
}

pub fn ols_solve(system: &TransformedSystem) -> Result<TaolsFit> {
    ols_solve_with(system, CovarianceKind::Homoskedastic)
}

pub fn ols_solve_with(system: &TransformedSystem, covariance: CovarianceKind) -> Result<TaolsFit> {
    let k = system.k();
    if k < MIN_K {
        return Err(TaolsError::InsufficientK { k, min: MIN_K });
    }
    let t = system.t() as f64;
    let trend = Regressor::Trend.index();

    let mut columns: Vec<Vec<f64>> = Regressor::ALL.iter().map(|&r| system.column(r)).collect();
    for v in &mut columns[trend] {
        *v /= t;
    }

    let sol = qr_least_squares(&columns, system.response()).map_err(|e| TaolsError::SingularDesign {
        column: Regressor::ALL[e.column].name(),
    })?;

    let dof = k - NUM_REGRESSORS;
    let rss = sol.rss();
    let residual_variance = rss / dof as f64;
    let cov = match covariance {
        CovarianceKind::Homoskedastic => sol
            .unscaled_covariance()
            .into_iter()
            .map(|c| c * residual_variance)
            .collect::<Vec<_>>(),
        CovarianceKind::Robust => {
            let scale = k as f64 / dof as f64;
            sol.weighted_covariance(|i| scale * sol.residuals[i] * sol.residuals[i])
        }
    };

    let mut estimates: [f64; NUM_REGRESSORS] = std::array::from_fn(|j| sol.coefficients[j]);
    let mut std_errors: [f64; NUM_REGRESSORS] = std::array::from_fn(|j| cov[j * NUM_REGRESSORS + j].max(0.0).sqrt());
    estimates[trend] /= t;
    std_errors[trend] /= t;

    Ok(TaolsFit {
        estimates: Coefficients::from_array(estimates),
        std_errors: Coefficients::from_array(std_errors),
        residual_variance,
        rss,
        residuals: sol.residuals,
        k,
        t: system.t(),
        dof,
        covariance,
    })
}

/// `k_min, k_min + step, ..., <= k_max`.
pub fn k_grid(k_min: usize, k_max: usize, step: usize) -> Result<Vec<usize>> {
    if step == 0 {
        return Err(TaolsError::InvalidGrid("step must be positive".into()));
    }
    if k_min > k_max {
        return Err(TaolsError::InvalidGrid(format!("k_min {k_min} exceeds k_max {k_max}")));
    }
    Ok((k_min..=k_max).step_by(step).collect())
}

pub fn default_k_grid() -> Vec<usize> {
    k_grid(DEFAULT_K_MIN, DEFAULT_K_MAX, 1).expect("default grid is valid")
}

/// Checks a grid against a series length before any fitting happens.
pub fn validate_grid(grid: &[usize], t: usize) -> Result<()> {
    if grid.is_empty() {
        return Err(TaolsError::InvalidGrid("grid is empty".into()));
    }
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(TaolsError::InvalidGrid(format!(
                "grid must be strictly increasing ({} follows {})",
                pair[1], pair[0]
            )));
        }
    }
    for &k in grid {
        if k < MIN_K {
            return Err(TaolsError::InsufficientK { k, min: MIN_K });
        }
        if k > t {
            return Err(TaolsError::OverResolution { k, t });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeStats {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl RangeStats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let mut n = 0usize;
        let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for v in values {
            n += 1;
            min = min.min(v);
            max = max.max(v);
            sum += v;
        }
        Self {
            min,
            mean: sum / n as f64,
            max,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSummary {
    pub lambda: RangeStats,
    pub phi: RangeStats,
}

/// One fit per K, in grid order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub grid: Vec<usize>,
    pub fits: Vec<TaolsFit>,
    pub summary: SweepSummary,
}

impl SweepResult {
    /// Pointwise intervals for `c`, aligned with the grid.
    pub fn intervals(&self, c: Coefficient, level: f64) -> Result<Vec<ConfidenceInterval>> {
        self.fits.iter().map(|f| f.confidence_interval(c, level)).collect()
    }

    pub fn estimates(&self, c: Coefficient) -> Vec<f64> {
        self.fits.iter().map(|f| f.estimate(c)).collect()
    }

    pub fn t(&self) -> usize {
        self.fits[0].t
    }
}

pub fn k_sweep(dataset: &ClimateDataset, grid: &[usize]) -> Result<SweepResult> {
    k_sweep_with(dataset, grid, CovarianceKind::Homoskedastic)
}

/// Fits every K in `grid`. The transform is computed once at the largest K
/// and truncated, which yields the same numbers as building each system
/// separately.
pub fn k_sweep_with(dataset: &ClimateDataset, grid: &[usize], covariance: CovarianceKind) -> Result<SweepResult> {
    validate_grid(grid, dataset.len())?;
    let k_max = *grid.last().expect("validated non-empty");
    let full = build_transformed_system(dataset, k_max)?;

    let fits = grid
        .par_iter()
        .map(|&k| ols_solve_with(&full.truncate(k)?, covariance))
        .collect::<Result<Vec<_>>>()?;

    let summary = SweepSummary {
        lambda: RangeStats::of(fits.iter().map(|f| f.estimates.lambda)),
        phi: RangeStats::of(fits.iter().map(|f| f.estimates.phi)),
    };
    Ok(SweepResult {
        grid: grid.to_vec(),
        fits,
        summary,
    })
}
