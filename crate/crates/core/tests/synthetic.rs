use taols::estimator::{ols_solve, Coefficient};
use taols::series::first_difference;
use taols::synthetic::{
    median, sample_variance, shape_moments, simulate, simulate_with_truth, verify_multicointegration, DgpSpec, Noise,
};
use taols::transform::build_transformed_system;

#[test]
fn noiseless_data_recovered_at_every_k() {
    let spec = DgpSpec {
        t: 500,
        gamma: 0.4,
        mu: 0.02,
        seed: 17,
        ..DgpSpec::default()
    };
    let ds = simulate(&spec).unwrap();
    for k in [6, 10, 37, 80, 200, 500] {
        let fit = ols_solve(&build_transformed_system(&ds, k).unwrap()).unwrap();
        assert!((fit.estimate(Coefficient::Lambda) - 1.5).abs() < 1e-6, "K={k}");
        assert!((fit.estimate(Coefficient::Phi) - 20.0).abs() < 1e-6, "K={k}");
    }
}

#[test]
fn round_trip_reproduces_injected_noise() {
    for noise in [
        Noise::IidNormal { sigma: 0.7 },
        Noise::Ar1 { rho: 0.6, sigma: 1.0 },
        Noise::Spiked {
            sigma: 1.0,
            probability: 0.05,
            scale: 10.0,
        },
    ] {
        let spec = DgpSpec {
            t: 1000,
            gamma: -0.3,
            mu: 0.01,
            noise,
            seed: 5,
            ..DgpSpec::default()
        };
        let sim = simulate_with_truth(&spec).unwrap();
        let v = verify_multicointegration(&sim.dataset, spec.lambda, spec.phi).unwrap();
        for (t, (got, injected)) in v.values().iter().zip(&sim.noise).enumerate() {
            let expected = injected + spec.gamma + spec.mu * (t + 1) as f64;
            // Partial sums of O(T^1.5) terms lose a few ulps per step.
            assert!((got - expected).abs() < 1e-8 * (1.0 + t as f64), "{noise:?} t={t}");
        }
    }
}

#[test]
fn differenced_noise_has_twice_the_variance() {
    let sigma = 1.3;
    let spec = DgpSpec {
        t: 20_000,
        noise: Noise::IidNormal { sigma },
        seed: 42,
        ..DgpSpec::default()
    };
    let sim = simulate_with_truth(&spec).unwrap();
    let v = verify_multicointegration(&sim.dataset, spec.lambda, spec.phi).unwrap();
    let dv = first_difference(&v);
    let var = sample_variance(&dv.values()[1..]);
    // Standard error of the sample variance is about 2σ² √(3/T) ≈ 0.04 here.
    assert!((var / (2.0 * sigma * sigma) - 1.0).abs() < 0.05, "{var}");
}

#[test]
fn reconstructed_error_is_stationary() {
    let ratios: Vec<f64> = (0..15)
        .map(|seed| {
            let spec = DgpSpec {
                t: 5000,
                noise: Noise::Ar1 { rho: 0.5, sigma: 1.0 },
                seed,
                ..DgpSpec::default()
            };
            let ds = simulate(&spec).unwrap();
            let v = verify_multicointegration(&ds, spec.lambda, spec.phi).unwrap();
            let (a, b) = v.values().split_at(2500);
            sample_variance(b) / sample_variance(a)
        })
        .collect();
    let m = median(&ratios);
    assert!((0.5..=2.0).contains(&m), "{m}");
}

#[test]
fn spiked_noise_is_far_from_gaussian() {
    let spec = DgpSpec {
        t: 20_000,
        noise: Noise::Spiked {
            sigma: 1.0,
            probability: 0.05,
            scale: 10.0,
        },
        seed: 3,
        ..DgpSpec::default()
    };
    let sim = simulate_with_truth(&spec).unwrap();
    let dv: Vec<f64> = sim.noise.windows(2).map(|w| w[1] - w[0]).collect();
    let (_, kurt) = shape_moments(&dv);
    assert!(kurt > 3.0, "excess kurtosis {kurt}");

    let gauss = simulate_with_truth(&DgpSpec {
        noise: Noise::IidNormal { sigma: 1.0 },
        ..spec
    })
    .unwrap();
    let dv: Vec<f64> = gauss.noise.windows(2).map(|w| w[1] - w[0]).collect();
    let (skew, kurt) = shape_moments(&dv);
    assert!(skew.abs() < 0.1 && kurt.abs() < 0.2, "{skew} {kurt}");
}
