//! Radiative forcing: the logarithmic CO₂ formula and summation of
//! precomputed component forcings.

use crate::error::{Result, TaolsError};
use crate::series::{ensure_aligned, TimeSeries};

/// W/m² per unit of `ln(C / C0)`.
pub const CO2_FORCING_COEFFICIENT: f64 = 5.35;

/// Pre-industrial CO₂ concentration in ppm.
pub const PREINDUSTRIAL_CO2_PPM: f64 = 280.0;

/// Forcing from a doubling of CO₂, `5.35 ln 2` W/m² (unrounded).
pub fn doubling_forcing() -> f64 {
    CO2_FORCING_COEFFICIENT * std::f64::consts::LN_2
}

/// A CO₂ concentration paired with the baseline it is measured against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Co2Record {
    concentration: f64,
    baseline: f64,
}

impl Co2Record {
    pub fn new(concentration: f64, baseline: f64) -> Result<Self> {
        check_concentration("CO2 concentration", concentration)?;
        check_concentration("CO2 baseline", baseline)?;
        Ok(Self {
            concentration,
            baseline,
        })
    }

    /// Concentration against the 280 ppm pre-industrial baseline.
    pub fn preindustrial(concentration: f64) -> Result<Self> {
        Self::new(concentration, PREINDUSTRIAL_CO2_PPM)
    }

    pub fn concentration(&self) -> f64 {
        self.concentration
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    pub fn forcing(&self) -> f64 {
        CO2_FORCING_COEFFICIENT * (self.concentration / self.baseline).ln()
    }
}

fn check_concentration(quantity: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(TaolsError::Domain { quantity, value })
    }
}

/// `5.35 ln(C / C0)` in W/m².
pub fn rf_co2(concentration: f64, baseline: f64) -> Result<f64> {
    Co2Record::new(concentration, baseline).map(|r| r.forcing())
}

/// Converts an annual concentration series (ppm) into forcing (W/m²).
pub fn co2_series_forcing(concentration: &TimeSeries, baseline: f64) -> Result<TimeSeries> {
    let values = concentration
        .values()
        .iter()
        .map(|&c| rf_co2(c, baseline))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(concentration.start_year(), values)
}

/// Elementwise sum of aligned component forcings.
pub fn aggregate_forcing(components: &[TimeSeries]) -> Result<TimeSeries> {
    let (first, rest) = components
        .split_first()
        .ok_or_else(|| TaolsError::Misaligned("no forcing components supplied".into()))?;
    let mut total = first.values().to_vec();
    for component in rest {
        ensure_aligned(first, component)?;
        for (acc, v) in total.iter_mut().zip(component.values()) {
            *acc += v;
        }
    }
    TimeSeries::new(first.start_year(), total)
}
