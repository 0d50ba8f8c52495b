//! Householder QR least squares for small, dense, tall systems.
//!
//! Columns are processed in their given order without pivoting so a rank
//! failure can be attributed to a specific column: column `j` is rejected
//! when the part of it orthogonal to columns `0..j` has norm below
//! `RANK_TOLERANCE` times its original norm.

/// Relative norm below which a column counts as collinear.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankDeficient {
    pub column: usize,
}

/// Least-squares solution of `X b ≈ y` via `X = Q R`.
#[derive(Clone, Debug)]
pub struct QrSolution {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `R⁻¹`, upper triangular, row-major `n × n`.
    r_inv: Vec<f64>,
    /// Thin `Q`, column-major `m × n`.
    q: Vec<f64>,
    m: usize,
    n: usize,
}

impl QrSolution {
    pub fn rss(&self) -> f64 {
        self.residuals.iter().map(|e| e * e).sum()
    }

    /// `(XᵀX)⁻¹ = R⁻¹ R⁻ᵀ`, row-major `n × n`.
    pub fn unscaled_covariance(&self) -> Vec<f64> {
        self.sandwich(|_| 1.0, true)
    }

    /// `R⁻¹ (Qᵀ diag(w) Q) R⁻ᵀ` with `w_i = weight(i)`; equals
    /// `(XᵀX)⁻¹ Xᵀ diag(w) X (XᵀX)⁻¹`.
    pub fn weighted_covariance(&self, weight: impl Fn(usize) -> f64) -> Vec<f64> {
        self.sandwich(weight, false)
    }

    fn sandwich(&self, weight: impl Fn(usize) -> f64, identity_meat: bool) -> Vec<f64> {
        let n = self.n;
        let mut meat = vec![0.0; n * n];
        if identity_meat {
            for j in 0..n {
                meat[j * n + j] = 1.0;
            }
        } else {
            for a in 0..n {
                for b in a..n {
                    let qa = &self.q[a * self.m..(a + 1) * self.m];
                    let qb = &self.q[b * self.m..(b + 1) * self.m];
                    let s: f64 = (0..self.m).map(|i| weight(i) * qa[i] * qb[i]).sum();
                    meat[a * n + b] = s;
                    meat[b * n + a] = s;
                }
            }
        }
        // R⁻¹ · meat · R⁻ᵀ
        let mut tmp = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                tmp[i * n + j] = (0..n).map(|l| self.r_inv[i * n + l] * meat[l * n + j]).sum();
            }
        }
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|l| tmp[i * n + l] * self.r_inv[j * n + l]).sum();
            }
        }
        out
    }
}

/// Solves `min ‖X b − y‖₂` for `X` given as `n` columns of length `m >= n`.
pub fn qr_least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<QrSolution, RankDeficient> {
    let n = columns.len();
    let m = y.len();
    assert!(n >= 1 && m >= n, "need a tall system, got {m} x {n}");
    assert!(columns.iter().all(|c| c.len() == m), "ragged design matrix");

    // Working copy, column-major; reflectors overwrite it in place.
    let mut a: Vec<f64> = columns.iter().flatten().copied().collect();
    let mut rhs = y.to_vec();
    let mut r = vec![0.0; n * n];
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);

    for k in 0..n {
        let original = norm(&columns[k]);
        let col = &a[k * m + k..(k + 1) * m];
        let remaining = norm(col);
        if original == 0.0 || remaining < RANK_TOLERANCE * original {
            return Err(RankDeficient { column: k });
        }

        let alpha = if col[0] > 0.0 { -remaining } else { remaining };
        let mut v = col.to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();

        let reflect = |target: &mut [f64]| {
            let s: f64 = v.iter().zip(target.iter()).map(|(p, q)| p * q).sum();
            let f = 2.0 * s / vnorm2;
            for (t, p) in target.iter_mut().zip(&v) {
                *t -= f * p;
            }
        };
        for j in k + 1..n {
            reflect(&mut a[j * m + k..(j + 1) * m]);
        }
        reflect(&mut rhs[k..]);

        r[k * n + k] = alpha;
        for j in k + 1..n {
            r[k * n + j] = a[j * m + k];
        }
        reflectors.push(v);
    }

    // Back substitution R b = (Qᵀ y)[..n]
    let mut coefficients = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| r[i * n + j] * coefficients[j]).sum();
        coefficients[i] = (rhs[i] - s) / r[i * n + i];
    }

    let residuals: Vec<f64> = (0..m)
        .map(|i| y[i] - (0..n).map(|j| columns[j][i] * coefficients[j]).sum::<f64>())
        .collect();

    // R⁻¹ column by column: R x = e_c
    let mut r_inv = vec![0.0; n * n];
    for c in 0..n {
        for i in (0..=c).rev() {
            let target = if i == c { 1.0 } else { 0.0 };
            let s: f64 = (i + 1..=c).map(|j| r[i * n + j] * r_inv[j * n + c]).sum();
            r_inv[i * n + c] = (target - s) / r[i * n + i];
        }
    }

    // Thin Q = H_0 H_1 ... H_{n-1} [I_n; 0]
    let mut q = vec![0.0; m * n];
    for c in 0..n {
        let col = &mut q[c * m..(c + 1) * m];
        col[c] = 1.0;
        for (k, v) in reflectors.iter().enumerate().rev() {
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            let tail = &mut col[k..];
            let s: f64 = v.iter().zip(tail.iter()).map(|(p, q)| p * q).sum();
            let f = 2.0 * s / vnorm2;
            for (t, p) in tail.iter_mut().zip(v) {
                *t -= f * p;
            }
        }
    }

    Ok(QrSolution {
        coefficients,
        residuals,
        r_inv,
        q,
        m,
        n,
    })
}

fn norm(x: &[f64]) -> f64 {
    // Scaled to avoid overflow on the large cumulative columns.
    let scale = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}
