//! Independent oracles used by the integration and acceptance tests. Nothing
//! here calls into the estimator's solver or transform code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use taols::transform::{TransformedSystem, NUM_REGRESSORS};

/// Solves the normal equations `(XᵀX) b = Xᵀy` by Gauss-Jordan elimination
/// with partial pivoting. Columns are equilibrated to unit norm first and
/// the solution is scaled back.
pub fn normal_equations(columns: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = columns.len();
    let scales: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let cols: Vec<Vec<f64>> = columns
        .iter()
        .zip(&scales)
        .map(|(c, s)| c.iter().map(|v| v / s).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    // Augmented [XᵀX | Xᵀy]
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| dot(&cols[i], &cols[j])).collect();
            row.push(dot(&cols[i], y));
            row
        })
        .collect();
    for p in 0..n {
        let pivot = (p..n).max_by(|&a, &b| m[a][p].abs().total_cmp(&m[b][p].abs())).unwrap();
        m.swap(p, pivot);
        let d = m[p][p];
        for v in m[p].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != p {
                let f = m[r][p];
                let prow = m[p].clone();
                for (v, pv) in m[r].iter_mut().zip(prow) {
                    *v -= f * pv;
                }
            }
        }
    }
    (0..n).map(|i| m[i][n] / scales[i]).collect()
}

/// A random, well-conditioned transformed system with column magnitudes
/// spread like the real design (constant, trend, cumulative, level, change).
pub fn random_system(seed: u64) -> TransformedSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(10..=80);
    let t = rng.random_range(k..=400);
    let magnitudes = [1.0, 1e2, 1e4, 10.0, 1.0];
    let regressors: Vec<[f64; NUM_REGRESSORS]> = (0..k)
        .map(|_| {
            std::array::from_fn(|j| {
                let z: f64 = rng.sample(StandardNormal);
                magnitudes[j] * z
            })
        })
        .collect();
    let response = regressors
        .iter()
        .map(|row| {
            let noise: f64 = rng.sample(StandardNormal);
            0.5 * row[0] + 0.01 * row[1] + 1.5 * row[2] + 20.0 * row[3] + 0.3 * row[4] + noise
        })
        .collect();
    TransformedSystem::from_parts(response, regressors, t).unwrap()
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn sine_basis(i: usize, r: f64) -> f64 {
    std::f64::consts::SQRT_2 * ((i as f64 - 0.5) * std::f64::consts::PI * r).sin()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
