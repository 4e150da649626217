//! Small dense complex linear-algebra helpers shared by the analysis modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// `(A + A^H) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Hermitian square root of a positive semidefinite matrix. Negative
/// eigenvalues from round-off are clamped to zero.
pub fn hermitian_sqrt(a: &CMatrix) -> CMatrix {
    let eig = hermitian_part(a).symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        scaled.column_mut(j).scale_mut(s);
    }
    scaled * eig.eigenvectors.adjoint()
}

/// Natural log-determinant of a Hermitian positive definite matrix via
/// Cholesky.
pub fn ln_det_hpd(a: &CMatrix) -> Result<f64> {
    match a.clone().cholesky() {
        Some(chol) => Ok(chol.l().diagonal().iter().map(|d| 2.0 * d.re.ln()).sum()),
        None => Err(Error::SingularCovariance {
            min_eigenvalue: hermitian_eigenvalues(a).last().copied().unwrap_or(0.0),
        }),
    }
}

/// `ln det(I + s A)` for Hermitian positive semidefinite `A` and `s >= 0`.
pub fn ln_det_identity_plus(a: &CMatrix, s: f64) -> Result<f64> {
    let n = a.nrows();
    let m = CMatrix::identity(n, n) + a.map(|z| z * s);
    ln_det_hpd(&m)
}

/// Principal sub-matrix keeping the rows and columns listed in `index`.
pub fn principal_submatrix(a: &CMatrix, index: &[usize]) -> CMatrix {
    CMatrix::from_fn(index.len(), index.len(), |i, j| a[(index[i], index[j])])
}

/// `ln n!` via direct summation; exact enough for the small counts used
/// here and never overflows.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln(1 + e^x)` without overflow.
pub fn ln_1p_exp(x: f64) -> f64 {
    if x > 35.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Log-sum-exp accumulator for sums of positive terms given by their logs.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        LogSum { max: f64::NEG_INFINITY, scaled: 0.0 }
    }
}

impl LogSum {
    pub fn add(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.max {
            self.scaled = self.scaled * (self.max - ln_term).exp() + 1.0;
            self.max = ln_term;
        } else {
            self.scaled += (ln_term - self.max).exp();
        }
    }

    pub fn ln(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
