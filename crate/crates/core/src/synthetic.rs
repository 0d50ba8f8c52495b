//! Synthetic multicointegrated forcing/temperature data with known
//! parameters, and a Monte Carlo driver for checking the estimator on it.
//!
//! Temperature is a driftless random walk `s_t = Σ u_τ`, `u ~ N(0, σ_s²)`.
//! Given a stationary error `v_t`, forcing is
//!
//! ```text
//! f_t = λ s_t + φ Δs_t + Δv_t + μ          (+ γ at t = 1)
//! ```
//!
//! with pre-sample values `s_0 = v_0 = 0`. Summing gives exactly
//! `F_t = γ + μ t + λ S_t + φ s_t + v_t` for every `t`.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`, whose output
//! stream is specified independently of platform and word size.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Result, TaolsError};
use crate::estimator::{ols_solve_with, Coefficient, CovarianceKind};
use crate::series::{ensure_aligned, ClimateDataset, TimeSeries};
use crate::transform::build_transformed_system;

pub const MIN_SIMULATION_LEN: usize = 20;

/// Law of the multicointegration error `v_t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Noise {
    None,
    IidNormal {
        sigma: f64,
    },
    /// Stationary AR(1) started from its stationary distribution.
    Ar1 {
        rho: f64,
        sigma: f64,
    },
    /// Gaussian noise plus occasional one-sided negative spikes of size
    /// `scale · σ · |z|`, a stand-in for volcanic eruptions.
    Spiked {
        sigma: f64,
        probability: f64,
        scale: f64,
    },
}

impl Noise {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(TaolsError::InvalidSpec(msg));
        let check_sigma = |sigma: f64| {
            if sigma >= 0.0 && sigma.is_finite() {
                Ok(())
            } else {
                bad(format!("noise sigma must be >= 0, got {sigma}"))
            }
        };
        match *self {
            Noise::None => Ok(()),
            Noise::IidNormal { sigma } => check_sigma(sigma),
            Noise::Ar1 { rho, sigma } => {
                check_sigma(sigma)?;
                if rho.abs() < 1.0 {
                    Ok(())
                } else {
                    bad(format!("AR(1) coefficient must satisfy |rho| < 1, got {rho}"))
                }
            }
            Noise::Spiked {
                sigma,
                probability,
                scale,
            } => {
                check_sigma(sigma)?;
                if !(0.0..=1.0).contains(&probability) {
                    return bad(format!("spike probability must lie in [0, 1], got {probability}"));
                }
                if !(scale >= 0.0 && scale.is_finite()) {
                    return bad(format!("spike scale must be >= 0, got {scale}"));
                }
                Ok(())
            }
        }
    }

    fn sample(&self, t: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut normal = || -> f64 { rng.sample(StandardNormal) };
        match *self {
            Noise::None => vec![0.0; t],
            Noise::IidNormal { sigma } => (0..t).map(|_| sigma * normal()).collect(),
            Noise::Ar1 { rho, sigma } => {
                let mut v = Vec::with_capacity(t);
                let mut prev = sigma / (1.0 - rho * rho).sqrt() * normal();
                v.push(prev);
                for _ in 1..t {
                    prev = rho * prev + sigma * normal();
                    v.push(prev);
                }
                v
            }
            Noise::Spiked {
                sigma,
                probability,
                scale,
            } => (0..t)
                .map(|_| {
                    let base: f64 = rng.sample(StandardNormal);
                    let size: f64 = rng.sample(StandardNormal);
                    let hit = rng.random::<f64>() < probability;
                    let spike = if hit { -scale * sigma * size.abs() } else { 0.0 };
                    sigma * base + spike
                })
                .collect(),
        }
    }
}

/// Parameters of one simulated dataset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DgpSpec {
    pub t: usize,
    pub lambda: f64,
    pub phi: f64,
    pub gamma: f64,
    pub mu: f64,
    pub noise: Noise,
    /// Standard deviation of the temperature increments.
    pub sigma_s: f64,
    pub seed: u64,
    pub start_year: i64,
}

impl Default for DgpSpec {
    fn default() -> Self {
        Self {
            t: 500,
            lambda: 1.5,
            phi: 20.0,
            gamma: 0.0,
            mu: 0.0,
            noise: Noise::None,
            sigma_s: 1.0,
            seed: 0,
            start_year: 1850,
        }
    }
}

impl DgpSpec {
    pub fn validate(&self) -> Result<()> {
        if self.t < MIN_SIMULATION_LEN {
            return Err(TaolsError::InvalidSpec(format!(
                "T = {} is below the minimum of {MIN_SIMULATION_LEN}",
                self.t
            )));
        }
        if !(self.sigma_s >= 0.0 && self.sigma_s.is_finite()) {
            return Err(TaolsError::InvalidSpec(format!(
                "temperature sigma must be >= 0, got {}",
                self.sigma_s
            )));
        }
        for (name, v) in [
            ("lambda", self.lambda),
            ("phi", self.phi),
            ("gamma", self.gamma),
            ("mu", self.mu),
        ] {
            if !v.is_finite() {
                return Err(TaolsError::InvalidSpec(format!("{name} must be finite")));
            }
        }
        self.noise.validate()
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// A simulated dataset and the error series injected into it.
#[derive(Clone, Debug, PartialEq)]
pub struct Simulation {
    pub dataset: ClimateDataset,
    pub noise: Vec<f64>,
}

pub fn simulate_with_truth(spec: &DgpSpec) -> Result<Simulation> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let t = spec.t;

    let mut temperature = Vec::with_capacity(t);
    let mut level = 0.0;
    for _ in 0..t {
        let u: f64 = rng.sample(StandardNormal);
        level += spec.sigma_s * u;
        temperature.push(level);
    }
    let noise = spec.noise.sample(t, &mut rng);

    let mut forcing = Vec::with_capacity(t);
    let (mut s_prev, mut v_prev) = (0.0, 0.0);
    for (i, (&s, &v)) in temperature.iter().zip(&noise).enumerate() {
        let mut f = spec.lambda * s + spec.phi * (s - s_prev) + (v - v_prev) + spec.mu;
        if i == 0 {
            f += spec.gamma;
        }
        forcing.push(f);
        s_prev = s;
        v_prev = v;
    }

    let label = format!(
        "synthetic T={} lambda={} phi={} seed={}",
        t, spec.lambda, spec.phi, spec.seed
    );
    let dataset = ClimateDataset::new(
        TimeSeries::new(spec.start_year, forcing)?,
        TimeSeries::new(spec.start_year, temperature)?,
        label,
    )?;
    Ok(Simulation { dataset, noise })
}

pub fn simulate(spec: &DgpSpec) -> Result<ClimateDataset> {
    simulate_with_truth(spec).map(|s| s.dataset)
}

/// `v_t = Σ_{τ<=t}(f_τ − λ s_τ) − φ s_t`. On simulated data this equals
/// `γ + μ t` plus the injected error.
pub fn verify_multicointegration(dataset: &ClimateDataset, lambda: f64, phi: f64) -> Result<TimeSeries> {
    let (f, s) = (dataset.forcing(), dataset.temperature());
    ensure_aligned(f, s)?;
    let mut heat = 0.0;
    let v = f
        .values()
        .iter()
        .zip(s.values())
        .map(|(&f, &s)| {
            heat += f - lambda * s;
            heat - phi * s
        })
        .collect();
    TimeSeries::new(f.start_year(), v)
}

pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Sample skewness and excess kurtosis (population moments).
pub fn shape_moments(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m = |p: i32| values.iter().map(|v| (v - mean).powi(p)).sum::<f64>() / n;
    let m2 = m(2);
    (m(3) / m2.powf(1.5), m(4) / (m2 * m2) - 3.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloConfig {
    pub spec: DgpSpec,
    pub replications: usize,
    pub k: usize,
    pub level: f64,
    pub covariance: CovarianceKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloSummary {
    pub lambda: Vec<f64>,
    pub phi: Vec<f64>,
    pub lambda_covered: usize,
    pub phi_covered: usize,
}

impl MonteCarloSummary {
    pub fn replications(&self) -> usize {
        self.lambda.len()
    }

    pub fn median_lambda(&self) -> f64 {
        median(&self.lambda)
    }

    pub fn median_phi(&self) -> f64 {
        median(&self.phi)
    }

    pub fn lambda_coverage(&self) -> f64 {
        self.lambda_covered as f64 / self.replications() as f64
    }

    pub fn phi_coverage(&self) -> f64 {
        self.phi_covered as f64 / self.replications() as f64
    }
}

/// Runs `replications` independent simulate-and-fit rounds. Replication `r`
/// uses seed `spec.seed + r`, so results do not depend on scheduling.
pub fn monte_carlo(config: &MonteCarloConfig) -> Result<MonteCarloSummary> {
    config.spec.validate()?;
    if config.replications == 0 {
        return Err(TaolsError::InvalidSpec("at least one replication is required".into()));
    }
    let truth = config.spec;
    let rounds = (0..config.replications as u64)
        .into_par_iter()
        .map(|r| {
            let spec = truth.with_seed(truth.seed.wrapping_add(r));
            let data = simulate(&spec)?;
            let fit = ols_solve_with(&build_transformed_system(&data, config.k)?, config.covariance)?;
            let lambda_ci = fit.confidence_interval(Coefficient::Lambda, config.level)?;
            let phi_ci = fit.confidence_interval(Coefficient::Phi, config.level)?;
            Ok((
                fit.estimates.lambda,
                fit.estimates.phi,
                lambda_ci.contains(truth.lambda),
                phi_ci.contains(truth.phi),
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MonteCarloSummary {
        lambda: rounds.iter().map(|r| r.0).collect(),
        phi: rounds.iter().map(|r| r.1).collect(),
        lambda_covered: rounds.iter().filter(|r| r.2).count(),
        phi_covered: rounds.iter().filter(|r| r.3).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_relation_is_exact() {
        let spec = DgpSpec {
            t: 200,
            gamma: 0.7,
            mu: -0.02,
            seed: 11,
            ..DgpSpec::default()
        };
        let sim = simulate_with_truth(&spec).unwrap();
        let v = verify_multicointegration(&sim.dataset, spec.lambda, spec.phi).unwrap();
        for (t, &x) in v.values().iter().enumerate() {
            let det = spec.gamma + spec.mu * (t + 1) as f64;
            assert!((x - det).abs() < 1e-9 * (1.0 + x.abs()), "t={t}: {x} vs {det}");
        }
    }

    #[test]
    fn identity_relation_on_hand_data() {
        let s = TimeSeries::new(2000, vec![0.3, -1.0, 2.5, 0.0]).unwrap();
        let ds = ClimateDataset::new(s.clone(), s, "f = s").unwrap();
        let v = verify_multicointegration(&ds, 1.0, 0.0).unwrap();
        assert!(v.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let spec = DgpSpec {
            noise: Noise::Spiked {
                sigma: 1.0,
                probability: 0.1,
                scale: 5.0,
            },
            seed: 99,
            ..DgpSpec::default()
        };
        assert_eq!(simulate(&spec).unwrap(), simulate(&spec).unwrap());
        assert_ne!(simulate(&spec).unwrap(), simulate(&spec.with_seed(100)).unwrap());
    }

    #[test]
    fn invalid_specs_rejected() {
        let base = DgpSpec::default();
        let cases = [
            DgpSpec { t: 19, ..base },
            DgpSpec { sigma_s: -1.0, ..base },
            DgpSpec {
                noise: Noise::IidNormal { sigma: -0.1 },
                ..base
            },
            DgpSpec {
                noise: Noise::Ar1 { rho: 1.0, sigma: 1.0 },
                ..base
            },
            DgpSpec {
                noise: Noise::Spiked {
                    sigma: 1.0,
                    probability: 1.5,
                    scale: 1.0,
                },
                ..base
            },
            DgpSpec {
                lambda: f64::NAN,
                ..base
            },
        ];
        for spec in cases {
            assert!(matches!(simulate(&spec), Err(TaolsError::InvalidSpec(_))), "{spec:?}");
        }
    }

    #[test]
    fn moments_of_known_samples() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!((sample_variance(&[1.0, 2.0, 3.0, 4.0]) - 5.0 / 3.0).abs() < 1e-15);
        let (skew, kurt) = shape_moments(&[-1.0, 1.0, -1.0, 1.0]);
        assert!(skew.abs() < 1e-15);
        assert!((kurt + 2.0).abs() < 1e-15);
    }
}
