//! Climate quantities implied by the estimates: equilibrium climate
//! sensitivity from λ, the atmospheric share of stored heat from φ, and the
//! steady-state warming from a sustained forcing step.

use crate::error::{Result, TaolsError};
use crate::estimator::{ConfidenceInterval, RangeStats, SweepResult};
use crate::forcing::doubling_forcing;

/// Heat needed to warm the atmosphere by 1 °C, in W-yr/m².
pub const ATMOSPHERIC_HEAT_PER_DEGREE: f64 = 0.31;

/// Numerator of the atmospheric share in percent, `100 × 0.31`.
pub const ATMOSPHERIC_SHARE_NUMERATOR: f64 = 100.0 * ATMOSPHERIC_HEAT_PER_DEGREE;

fn require_positive(quantity: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(TaolsError::NonPhysical { quantity, value })
    }
}

/// Warming per CO₂ doubling, `5.35 ln 2 / λ` in °C.
pub fn ecs_from_lambda(lambda: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    Ok(doubling_forcing() / lambda)
}

/// Maps a λ interval to an ECS interval. ECS decreases in λ, so the
/// endpoints swap.
pub fn ecs_interval(lambda: &ConfidenceInterval) -> Result<ConfidenceInterval> {
    require_positive("lambda interval lower bound", lambda.lower)?;
    ConfidenceInterval::new(
        ecs_from_lambda(lambda.upper)?,
        ecs_from_lambda(lambda.lower)?,
        lambda.level,
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EcsEstimate {
    pub ecs: f64,
    pub interval: ConfidenceInterval,
}

impl EcsEstimate {
    pub fn from_lambda(lambda: f64, lambda_interval: &ConfidenceInterval) -> Result<Self> {
        Ok(Self {
            ecs: ecs_from_lambda(lambda)?,
            interval: ecs_interval(lambda_interval)?,
        })
    }
}

/// Percentage of total stored heat that warms the atmosphere, `31 / φ`.
pub fn atmospheric_share(phi: f64) -> Result<f64> {
    require_positive("phi", phi)?;
    Ok(ATMOSPHERIC_SHARE_NUMERATOR / phi)
}

/// Surface warming once a forcing step held for `duration` years has been
/// absorbed as heat: `forcing_step · duration / φ`.
pub fn steady_state_warming(forcing_step: f64, duration: f64, phi: f64) -> Result<f64> {
    require_positive("phi", phi)?;
    if !duration.is_finite() || duration < 0.0 {
        return Err(TaolsError::NonPhysical {
            quantity: "duration",
            value: duration,
        });
    }
    Ok(forcing_step * duration / phi)
}

/// ECS statistics over a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EcsSummary {
    /// Range of per-K point estimates: `[ecs(λ_max), ecs(λ_min)]`.
    pub range: (f64, f64),
    /// ECS evaluated at the mean of λ over the grid.
    pub at_mean_lambda: f64,
    /// Mean of the per-K ECS values.
    pub per_k: RangeStats,
}

pub fn ecs_summary(sweep: &SweepResult) -> Result<EcsSummary> {
    let lambda = sweep.summary.lambda;
    let per_k = sweep
        .fits
        .iter()
        .map(|f| ecs_from_lambda(f.estimates.lambda))
        .collect::<Result<Vec<_>>>()?;
    Ok(EcsSummary {
        range: (ecs_from_lambda(lambda.max)?, ecs_from_lambda(lambda.min)?),
        at_mean_lambda: ecs_from_lambda(lambda.mean)?,
        per_k: RangeStats::of(per_k),
    })
}
