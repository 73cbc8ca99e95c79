use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::hamiltonians::{HermitianXYProblem, PhaseConfig};

/// Relative singular-value cutoff used when none is given.
pub const DEFAULT_SVD_TOLERANCE: f64 = 1e-12;

/// Recover `x ∈ ℂᵐ` from magnitudes `b = |A x|`, `A ∈ ℂⁿˣᵐ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRetrievalInstance {
    n: usize,
    m: usize,
    /// Row-major `n × m`.
    a: Vec<Complex64>,
    b: Vec<f64>,
}

impl PhaseRetrievalInstance {
    pub fn new(n: usize, m: usize, a: Vec<Complex64>, b: Vec<f64>) -> Result<Self> {
        if m == 0 || n < m {
            return Err(Error::invalid(format!("need n ≥ m ≥ 1, got n = {n}, m = {m}")));
        }
        check_len(n * m, a.len())?;
        check_len(n, b.len())?;
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("non-finite entry in A"));
        }
        if b.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("magnitudes must be finite and non-negative"));
        }
        Ok(PhaseRetrievalInstance { n, m, a, b })
    }

    /// Instance whose magnitudes are generated from a known signal.
    pub fn from_signal(n: usize, m: usize, a: Vec<Complex64>, x: &[Complex64]) -> Result<Self> {
        check_len(m, x.len())?;
        check_len(n * m, a.len())?;
        let ax = matvec(n, m, &a, x);
        let b = ax.iter().map(|z| z.norm()).collect();
        Self::new(n, m, a, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.b
    }

    fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.n, self.m, &self.a)
    }
}

pub(crate) fn matvec(n: usize, m: usize, a: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    (0..n).map(|i| (0..m).map(|j| a[i * m + j] * x[j]).sum()).collect()
}

/// Moore–Penrose pseudoinverse via SVD, discarding singular values below
/// `tolerance · σ_max`.
pub fn pseudo_inverse(a: &DMatrix<Complex64>, tolerance: f64) -> Result<DMatrix<Complex64>> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("svd tolerance must be positive"));
    }
    let (rows, cols) = a.shape();
    let svd = a.clone().svd(true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Data("SVD did not produce singular vectors".into())),
    };
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = tolerance * sigma_max;
    let mut pinv = DMatrix::<Complex64>::zeros(cols, rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for c in 0..cols {
            let vk = v_t[(k, c)].conj() * inv;
            for r in 0..rows {
                pinv[(c, r)] += vk * u[(r, k)].conj();
            }
        }
    }
    Ok(pinv)
}

/// `M = diag(b)(I − A A†)diag(b)`, symmetrised to be exactly Hermitian.
pub fn phase_retrieval_to_xy(instance: &PhaseRetrievalInstance, svd_tolerance: f64) -> Result<HermitianXYProblem> {
    let n = instance.n;
    let a = instance.matrix();
    let pinv = pseudo_inverse(&a, svd_tolerance)?;
    let projector = &a * &pinv;
    let b = &instance.b;
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let identity = if i == j { 1.0 } else { 0.0 };
            m[i * n + j] = (Complex64::new(identity, 0.0) - projector[(i, j)]) * b[i] * b[j];
        }
    }
    for i in 0..n {
        m[i * n + i].im = 0.0;
        for j in (i + 1)..n {
            let avg = 0.5 * (m[i * n + j] + m[j * n + i].conj());
            m[i * n + j] = avg;
            m[j * n + i] = avg.conj();
        }
    }
    HermitianXYProblem::new(n, m)
}

/// Least-squares signal `x = A† diag(b) u` for recovered phases `u`.
pub fn phase_retrieval_decode(instance: &PhaseRetrievalInstance, config: &PhaseConfig) -> Result<Vec<Complex64>> {
    check_len(instance.n, config.len())?;
    let pinv = pseudo_inverse(&instance.matrix(), DEFAULT_SVD_TOLERANCE)?;
    let rhs: Vec<Complex64> = config
        .phases()
        .iter()
        .zip(&instance.b)
        .map(|(&t, &b)| Complex64::from_polar(b, t))
        .collect();
    Ok((0..instance.m).map(|r| (0..instance.n).map(|c| pinv[(r, c)] * rhs[c]).sum()).collect())
}

/// Relative error `min_φ ‖x − e^{iφ} y‖ / ‖x‖` between two signals.
pub fn relative_error_up_to_phase(x: &[Complex64], y: &[Complex64]) -> f64 {
    let inner: Complex64 = y.iter().zip(x).map(|(yi, xi)| yi.conj() * xi).sum();
    let rot = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
    let diff: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - rot * yi).norm_sqr()).sum();
    let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if norm == 0.0 {
        diff.sqrt()
    } else {
        (diff / norm).sqrt()
    }
}
