use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_part, CMatrix};

/// Non-zero eigenvalues of a matrix pencil, strictly positive and sorted
/// descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenList {
    pub values: Vec<f64>,
    pub rank_tolerance_used: f64,
}

impl EigenList {
    pub fn empty() -> Self {
        EigenList { values: Vec::new(), rank_tolerance_used: 0.0 }
    }

    /// Builds a list from arbitrary positive values (sorted here).
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Domain { function: "EigenList", value: bad });
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(EigenList { values, rank_tolerance_used: 0.0 })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Shape and numerical tolerances for the Wishart moment formulas.
///
/// `p` is the row count and `q` the column count of the Gaussian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParams {
    pub p: usize,
    pub q: usize,
    /// Truncate the `h_i` series once a term falls below this.
    pub series_tol: f64,
    pub series_max_terms: usize,
    /// Relative gap below which two eigenvalues count as repeated.
    pub degeneracy_eps: f64,
    /// Relative spacing used to pull repeated eigenvalues apart.
    pub degeneracy_spread: f64,
    /// Eigenvalues at or below `rank_tol * max` are treated as zero.
    pub rank_tol: f64,
}

impl MomentParams {
    pub fn new(p: usize, q: usize) -> Self {
        MomentParams {
            p,
            q,
            series_tol: 1e-12,
            series_max_terms: 100_000,
            degeneracy_eps: 1e-8,
            degeneracy_spread: 1e-6,
            rank_tol: 1e-10,
        }
    }

    pub fn with_shape(&self, p: usize, q: usize) -> Self {
        MomentParams { p, q, ..*self }
    }

    pub(crate) fn check_shape(&self) -> Result<()> {
        if self.p == 0 || self.p > self.q {
            return Err(Error::Shape { p: self.p, q: self.q });
        }
        Ok(())
    }
}

/// Non-zero eigenvalues of `psi^{-1} sigma` for Hermitian PSD `sigma` and
/// Hermitian PD `psi`.
///
/// Solved as the symmetric pencil `L^{-1} sigma L^{-H}` with `psi = L L^H`,
/// so the spectrum is real by construction.
pub fn generalized_nonzero_eigs(sigma: &CMatrix, psi: &CMatrix, params: &MomentParams) -> Result<EigenList> {
    let n = psi.nrows();
    if psi.ncols() != n || sigma.shape() != (n, n) {
        return Err(Error::InvalidDimension(format!(
            "pencil shapes {:?} and {:?} do not match",
            sigma.shape(),
            psi.shape()
        )));
    }
    let psi = hermitian_part(psi);
    let chol = psi.clone().cholesky().ok_or_else(|| Error::SingularCovariance {
        min_eigenvalue: hermitian_eigenvalues(&psi).last().copied().unwrap_or(0.0),
    })?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(&hermitian_part(sigma))
        .ok_or(Error::SingularCovariance { min_eigenvalue: 0.0 })?;
    let c = l
        .solve_lower_triangular(&y.adjoint())
        .ok_or(Error::SingularCovariance { min_eigenvalue: 0.0 })?;
    let all = hermitian_eigenvalues(&hermitian_part(&c));
    let max = all.first().copied().unwrap_or(0.0);
    let cutoff = params.rank_tol * max;
    let values = if max > f64::MIN_POSITIVE {
        all.into_iter().filter(|&v| v > cutoff).collect()
    } else {
        Vec::new()
    };
    Ok(EigenList { values, rank_tolerance_used: cutoff })
}

/// Returns the eigenvalues with every cluster of near-equal values spread
/// symmetrically about its centre, so that all relative gaps are at least
/// `degeneracy_eps`.
pub fn separate_degenerate(eigs: &EigenList, params: &MomentParams) -> Result<Vec<f64>> {
    let mut v = eigs.values.clone();
    v.sort_by(|a, b| b.total_cmp(a));
    let Some(&max) = v.first() else {
        return Ok(v);
    };
    let min_gap = params.degeneracy_eps * max;
    let spread = params.degeneracy_spread * max;

    for _ in 0..=v.len() {
        let mut changed = false;
        let mut start = 0;
        while start < v.len() {
            let mut end = start + 1;
            while end < v.len() && v[end - 1] - v[end] < min_gap {
                end += 1;
            }
            let k = end - start;
            if k > 1 {
                let centre = v[start..end].iter().sum::<f64>() / k as f64;
                let half = (k - 1) as f64 / 2.0;
                let mut lift = 0.0;
                let lowest = centre - half * spread;
                if lowest <= 0.0 {
                    lift = spread - lowest;
                }
                for (j, x) in v[start..end].iter_mut().enumerate() {
                    *x = centre + (half - j as f64) * spread + lift;
                }
                changed = true;
            }
            start = end;
        }
        if !changed {
            return Ok(v);
        }
        v.sort_by(|a, b| b.total_cmp(a));
        let worst = v.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
        if worst >= min_gap {
            return Ok(v);
        }
    }
    let worst = v.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    Err(Error::DegenerateSpectrum { relative_gap: worst / max })
}

/// Additive corrections `(lower, upper)` bracketing `ln det(X Z X^H)` around
/// `ln det(X X^H)` for a `p x q` matrix `X` and positive definite `Z` with
/// eigenvalues `z_eigs` (any order).
pub fn logdet_sandwich(p: usize, z_eigs: &[f64]) -> Result<(f64, f64)> {
    let q = z_eigs.len();
    if p > q {
        return Err(Error::Shape { p, q });
    }
    if let Some(&bad) = z_eigs.iter().find(|&&z| !(z > 0.0)) {
        return Err(Error::Domain { function: "ln", value: bad });
    }
    let mut sorted = z_eigs.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let upper = sorted[..p].iter().map(|z| z.ln()).sum();
    let lower = sorted[q - p..].iter().map(|z| z.ln()).sum();
    Ok((lower, upper))
}
