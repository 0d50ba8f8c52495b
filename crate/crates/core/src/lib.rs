//! Transformed and augmented OLS (TAOLS) for multicointegrated systems,
//! applied to radiative forcing and surface temperature.
//!
//! The model is
//!
//! ```text
//! F_t = γ + μ t + λ S_t + φ s_t + δ Δs_t + e_t
//! ```
//!
//! where `F` and `S` are partial sums of forcing `f` and temperature `s`.
//! Every variable is projected onto `K` low-frequency sine functions and
//! the `K` transformed equations are solved by OLS. λ converts to an
//! equilibrium climate sensitivity and φ to the share of stored heat that
//! warms the atmosphere.
//!
//! ```
//! use taols::synthetic::{simulate, DgpSpec};
//! use taols::estimator::k_sweep;
//!
//! let data = simulate(&DgpSpec { t: 300, seed: 7, ..DgpSpec::default() }).unwrap();
//! let sweep = k_sweep(&data, &[20, 40, 60]).unwrap();
//! assert!((sweep.summary.lambda.mean - 1.5).abs() < 1e-6);
//! ```

pub mod climate;
pub mod error;
pub mod estimator;
pub mod forcing;
pub mod io;
pub mod linalg;
pub mod report;
pub mod series;
pub mod synthetic;
pub mod transform;

pub use error::{ErrorClass, Result, TaolsError};
pub use estimator::{
    confidence_interval, k_sweep, ols_solve, Coefficient, ConfidenceInterval, CovarianceKind, SweepResult, TaolsFit,
};
pub use series::{ClimateDataset, TimeSeries};
pub use transform::{build_transformed_system, TransformedSystem};
