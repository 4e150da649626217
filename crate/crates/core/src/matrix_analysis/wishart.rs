//! Determinant and log-determinant moments of non-central complex Wishart
//! matrices `B B^H`, where `B` is `p x q` (`p <= q`) with independent
//! columns, mean `B_bar` and column covariance `Omega`.
//!
//! Both moments depend on the mean only through the non-zero eigenvalues
//! `theta_1 > .. > theta_L` of the whitened matrix, and are ratios of a
//! structured determinant to the Vandermonde `prod_{i<j} (theta_j - theta_i)`.

use nalgebra::DMatrix;

use super::special::{digamma, digamma_sum, ln_gamma};
use super::spectrum::{generalized_nonzero_eigs, separate_degenerate, EigenList, MomentParams};
use crate::error::{Error, Result};
use crate::linalg::{ln_det_hpd, ln_factorial, CMatrix};

/// Complete homogeneous symmetric polynomials `h_0..=h_max` of `xs`.
fn complete_homogeneous(xs: &[f64], max: usize) -> Vec<f64> {
    let mut h = vec![0.0; max + 1];
    h[0] = 1.0;
    for &x in xs {
        for k in 1..=max {
            h[k] += x * h[k - 1];
        }
    }
    h
}

/// `U[k][r] = h_{k-r}(theta_0..theta_r)`: the divided differences of the
/// monomial `x^k` over the leading points. Unit lower triangular.
fn monomial_differences(theta: &[f64], n: usize) -> DMatrix<f64> {
    let mut u = DMatrix::zeros(n, n);
    for r in 0..theta.len().min(n) {
        let h = complete_homogeneous(&theta[..=r], n);
        for k in r..n {
            u[(k, r)] = h[k - r];
        }
    }
    u
}

fn check_count(l: usize, q: usize) -> Result<()> {
    if l > q {
        return Err(Error::Shape { p: l, q });
    }
    Ok(())
}

/// `J(theta) = det(Delta) / V(theta)` with
/// `Delta[i][j] = (q - L + j + theta_i) theta_i^(j-1)` (1-based `j`).
/// The empty list gives 1.
///
/// Row `i` of `Delta` is replaced by the divided difference of the column
/// functions over `theta_0..theta_i`, which removes `V` exactly; the ratio
/// itself loses all precision once three or more values cluster.
pub fn wishart_j(eigs: &EigenList, params: &MomentParams) -> Result<f64> {
    let l = eigs.len();
    if l == 0 {
        return Ok(1.0);
    }
    check_count(l, params.q)?;
    let theta = separate_degenerate(eigs, params)?;
    let base = (params.q - l) as f64;
    // Column j (0-based) is (base + j + 1) x^j + x^(j+1).
    let u = monomial_differences(&theta, l + 1);
    let d = DMatrix::from_fn(l, l, |i, j| (base + (j + 1) as f64) * u[(j, i)] + u[(j + 1, i)]);
    Ok(d.determinant())
}

/// `E{det(B B^H)}` for `B = B_bar + Omega^{1/2} W`, `W` i.i.d. CN(0, 1).
///
/// Equals `(q-L)!/(q-p)! * J(theta) * det(Omega)` where `theta` are the
/// non-zero eigenvalues of `Omega^{-1} B_bar B_bar^H`.
pub fn expected_det(b_bar: &CMatrix, omega: &CMatrix, params: &MomentParams) -> Result<f64> {
    Ok(ln_expected_det(b_bar, omega, params)?.exp())
}

/// Natural log of [`expected_det`], safe against overflow.
pub fn ln_expected_det(b_bar: &CMatrix, omega: &CMatrix, params: &MomentParams) -> Result<f64> {
    let (p, q) = b_bar.shape();
    if p > q {
        return Err(Error::Shape { p, q });
    }
    if omega.shape() != (p, p) {
        return Err(Error::InvalidDimension(format!(
            "covariance is {:?}, expected {p}x{p}",
            omega.shape()
        )));
    }
    if p == 0 {
        return Ok(0.0);
    }
    let params = params.with_shape(p, q);
    let sigma = b_bar * b_bar.adjoint();
    let eigs = generalized_nonzero_eigs(&sigma, omega, &params)?;
    let j = wishart_j(&eigs, &params)?;
    if !(j > 0.0) {
        return Err(Error::NonPositiveMoment { value: j });
    }
    Ok(ln_factorial(q - eigs.len()) - ln_factorial(q - p) + j.ln() + ln_det_hpd(omega)?)
}

/// Above this argument the leading Poisson tail terms, all equal to one in
/// double precision, are summed in closed form.
const SKIP_AHEAD_ABOVE: f64 = 400.0;

/// Values `S_k(x) = sum_{m>=0} P(Poisson(x) > m) / (c + k + m)` for
/// `k = 0..count`, where `c = q - L + 1`.
///
/// The Poisson pmf is carried in log space so large `x` does not underflow.
/// For large `x` the terms with `m < x - 9 sqrt(x)` have
/// `P(N > m) > 1 - 3e-18` (Chernoff), and their sum is the digamma
/// difference `psi(c + k + m0) - psi(c + k)`.
fn tail_series(x: f64, c: f64, count: usize, params: &MomentParams) -> Result<Vec<f64>> {
    let ln_x = x.ln();
    let (start, mut tail, mut ln_pmf, mut sums) = if x > SKIP_AHEAD_ABOVE {
        let m0 = (x - 9.0 * x.sqrt()).floor();
        let sums = (0..count)
            .map(|k| Ok(digamma(c + k as f64 + m0)? - digamma(c + k as f64)?))
            .collect::<Result<Vec<_>>>()?;
        (m0 as usize, 1.0, -x + m0 * ln_x - ln_gamma(m0 + 1.0)?, sums)
    } else {
        // P(N > 0) = 1 - e^{-x}
        (0, -(-x).exp_m1(), -x, vec![0.0; count])
    };
    for m in start..start + params.series_max_terms {
        let lead = tail / (c + m as f64);
        for (k, s) in sums.iter_mut().enumerate() {
            *s += tail / (c + (k + m) as f64);
        }
        if lead.abs() < params.series_tol {
            return Ok(sums);
        }
        ln_pmf += ln_x - ((m + 1) as f64).ln();
        tail -= ln_pmf.exp();
    }
    Err(Error::Convergence {
        terms: params.series_max_terms,
        residual_bound: x * tail.max(0.0),
    })
}

/// `h(x) = [h_1(x), .., h_L(x)]` with
/// `h_i(x) = x^(i-1) sum_k [1 - e^{-x} sum_{n<=k} x^n/n!] / (q - L + i + k)`.
pub fn h_vector(x: f64, l: usize, params: &MomentParams) -> Result<Vec<f64>> {
    check_count(l, params.q)?;
    let c = (params.q - l + 1) as f64;
    let sums = tail_series(x, c, l, params)?;
    Ok(sums.into_iter().enumerate().map(|(i, s)| x.powi(i as i32) * s).collect())
}

/// Clusters narrower than this fraction of `x + a` take their divided
/// differences from a Taylor expansion instead of the recursive table.
const CLUSTER_SPAN: f64 = 0.1;
const TAYLOR_TERMS: usize = 40;

/// Taylor coefficients `s^(m)(x) / m!`, `m = 1..=terms`, of
/// `s(x) = E[H(a, N)]`, `N ~ Poisson(x)`. Differentiating under the Poisson
/// law is a forward difference in `n`, so
/// `s^(m)(x) / m! = (-1)^(m-1) / m * E[1 / (a + N)_m]`.
fn tail_series_taylor(x: f64, a: f64, terms: usize) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; terms];
    let ln_x = x.ln();
    let mode = x.floor();
    let ln_peak = -x + mode * ln_x - ln_gamma(mode + 1.0)?;
    let mut add = |n: f64, ln_pmf: f64| {
        let w = ln_pmf.exp();
        let mut prod = 1.0;
        for (m, slot) in acc.iter_mut().enumerate() {
            prod /= a + n + m as f64;
            *slot += w * prod;
        }
    };
    // Walk out from the mode until the pmf drops below 1e-18 of the peak.
    let cutoff = ln_peak - 41.5;
    let (mut n, mut ln_pmf) = (mode, ln_peak);
    while ln_pmf > cutoff {
        add(n, ln_pmf);
        n += 1.0;
        ln_pmf += ln_x - n.ln();
    }
    let (mut n, mut ln_pmf) = (mode, ln_peak);
    while n > 0.0 {
        ln_pmf -= ln_x - n.ln();
        n -= 1.0;
        if ln_pmf <= cutoff {
            break;
        }
        add(n, ln_pmf);
    }
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(m, e)| if m % 2 == 0 { e } else { -e } / (m + 1) as f64)
        .collect())
}

/// Divided differences `S[r][i] = s[theta_r..theta_i]` of
/// `s(x) = E[H(a, Poisson(x))]`, given its values at every point.
fn tail_series_differences(theta: &[f64], values: &[f64], a: f64) -> Result<DMatrix<f64>> {
    let l = theta.len();
    let mut s = DMatrix::zeros(l, l);
    for (r, &v) in values.iter().enumerate() {
        s[(r, r)] = v;
    }
    for len in 1..l {
        for r in 0..l - len {
            let i = r + len;
            let pts = &theta[r..=i];
            let (hi, lo) = (pts.iter().cloned().fold(f64::MIN, f64::max), pts.iter().cloned().fold(f64::MAX, f64::min));
            s[(r, i)] = if hi - lo <= CLUSTER_SPAN * (lo + a) {
                let x0 = pts.iter().sum::<f64>() / pts.len() as f64;
                let coef = tail_series_taylor(x0, a, TAYLOR_TERMS)?;
                let offsets: Vec<f64> = pts.iter().map(|t| t - x0).collect();
                let h = complete_homogeneous(&offsets, TAYLOR_TERMS);
                // s[pts] = sum_{m >= len} c_m h_{m - len}(pts - x0)
                (len..=TAYLOR_TERMS).map(|m| coef[m - 1] * h[m - len]).sum()
            } else {
                (s[(r + 1, i)] - s[(r, i - 1)]) / (theta[i] - theta[r])
            };
        }
    }
    Ok(s)
}

/// `F(theta) = sum_i det(Delta_bar_i) / V(theta)`, where `Delta_bar_i` is the
/// monomial matrix `[g(theta_1), .., g(theta_L)]` with column `i` replaced
/// by `h(theta_i)`. The empty list gives 0.
///
/// The sum is the derivative of `det[g + eps h] / V` at `eps = 0`, i.e.
/// `tr(U^-1 E)` with `U` the divided differences of the monomials and `E`
/// those of the `h` entries. No Vandermonde division is involved.
pub fn wishart_f(eigs: &EigenList, params: &MomentParams) -> Result<f64> {
    let l = eigs.len();
    if l == 0 {
        return Ok(0.0);
    }
    check_count(l, params.q)?;
    let theta = separate_degenerate(eigs, params)?;
    let c = (params.q - l + 1) as f64;
    let u = monomial_differences(&theta, l);

    let values: Vec<Vec<f64>> = theta.iter().map(|&x| tail_series(x, c, l, params)).collect::<Result<_>>()?;
    let mut e = DMatrix::zeros(l, l);
    for k in 0..l {
        let at_points: Vec<f64> = values.iter().map(|v| v[k]).collect();
        let s = tail_series_differences(&theta, &at_points, c + k as f64)?;
        // Leibniz: (x^k s)[theta_0..theta_i] = sum_r x^k[theta_0..theta_r] s[theta_r..theta_i].
        for i in 0..l {
            e[(k, i)] = (0..=i.min(k)).map(|r| u[(k, r)] * s[(r, i)]).sum();
        }
    }
    let x = u
        .solve_lower_triangular(&e)
        .ok_or(Error::DegenerateSpectrum { relative_gap: 0.0 })?;
    Ok(x.trace())
}

/// `E{ln det(B B^H)}` in nats for `B = B_bar + W`, `W` i.i.d. CN(0, 1),
/// given the non-zero eigenvalues of `B_bar B_bar^H`.
pub fn expected_logdet(eigs: &EigenList, params: &MomentParams) -> Result<f64> {
    params.check_shape()?;
    Ok(digamma_sum(params.p, params.q)? + wishart_f(eigs, params)?)
}
