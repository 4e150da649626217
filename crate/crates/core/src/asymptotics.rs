//! Limiting behaviour of the ergodic capacity: the affine high-SNR law
//! `C ~ S (log2 rho - L)` and the regime of very many RIS elements.

use std::f64::consts::LN_2;

use crate::capacity_bounds::{
    log2_det_capacity, logdet_terms, mc_ecc, psd_sqrt, BoundKind, CapacityQuery, CapacityResult,
};
use crate::channel_model::{build_los_matrices, EffectiveStats, PathSet, PhaseShifts, SystemConfig};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_part, ln_det_hpd, ln_factorial, principal_submatrix, CMatrix, LogSum};
use crate::matrix_analysis::{check_order, digamma_sum, index_subsets, MomentParams};
use crate::monte_carlo::mc_mean;
use crate::rng::{complex_normal_matrix, uniform_angle};

/// High-SNR slope (bits/s/Hz per 3 dB) and power offset (3 dB units).
///
/// For `N_t > N_r` the offset has no closed form: `offset` is then a Monte
/// Carlo estimate and `offset_bounds` brackets it as `(lower, upper)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrExpansion {
    pub slope: f64,
    pub offset: f64,
    pub offset_bounds: Option<(f64, f64)>,
    pub offset_std_error: Option<f64>,
}

impl HighSnrExpansion {
    /// The affine approximation `S (log2 rho - L)`.
    pub fn capacity(&self, rho: f64) -> f64 {
        self.slope * (rho.log2() - self.offset)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HighSnrOptions {
    /// Trials for the `N_t > N_r` offset estimate.
    pub mc_trials: usize,
    pub seed: u64,
    pub moments: MomentParams,
}

impl Default for HighSnrOptions {
    fn default() -> Self {
        HighSnrOptions { mc_trials: 100_000, seed: 0, moments: MomentParams::new(1, 1) }
    }
}

pub fn high_snr_expansion(stats: &EffectiveStats, options: &HighSnrOptions) -> Result<HighSnrExpansion> {
    let (nr, nt) = stats.g_bar.shape();
    let terms = logdet_terms(stats, &options.moments)?;
    let p = terms.p as f64;
    let log2_nt = (nt as f64).log2();
    if nr >= nt {
        return Ok(HighSnrExpansion {
            slope: p,
            offset: log2_nt - (terms.ln_det_psi + terms.shared) / (p * LN_2),
            offset_bounds: None,
            offset_std_error: None,
        });
    }

    let smallest: f64 = terms.zeta[nt - nr..].iter().map(|z| z.ln()).sum();
    let largest: f64 = terms.zeta[..nr].iter().map(|z| z.ln()).sum();
    let upper = log2_nt - (smallest + terms.shared) / (p * LN_2);
    let lower = log2_nt - (largest + terms.shared) / (p * LN_2);

    let root = psd_sqrt(&stats.psi)?;
    let est = mc_mean(options.mc_trials, options.seed, |rng| {
        let g = &stats.g_bar + complex_normal_matrix(rng, nr, nt) * &root;
        ln_det_hpd(&hermitian_part(&(&g * g.adjoint())))
    })?;
    Ok(HighSnrExpansion {
        slope: p,
        offset: log2_nt - est.mean / (p * LN_2),
        offset_bounds: Some((lower, upper)),
        offset_std_error: Some(est.std_error / (p * LN_2)),
    })
}

/// Finite-difference slope `(C(rho_hi) - C(rho_lo)) / log2(rho_hi / rho_lo)`
/// of the Monte Carlo capacity. Both points share one random stream.
pub fn slope_empirical(stats: &EffectiveStats, rho_lo: f64, rho_hi: f64, trials: usize, seed: u64) -> Result<f64> {
    let at = |rho| mc_ecc(&CapacityQuery::new(rho, stats).with_trials(trials).with_seed(seed)).map(|r| r.value);
    Ok((at(rho_hi)? - at(rho_lo)?) / (rho_hi / rho_lo).log2())
}

fn is_numerically_zero(a: &CMatrix) -> bool {
    let max = hermitian_eigenvalues(&hermitian_part(a)).first().copied().unwrap_or(0.0);
    !(max > f64::MIN_POSITIVE)
}

fn central_stats(n_rx: usize, psi: CMatrix) -> EffectiveStats {
    EffectiveStats { g_bar: CMatrix::zeros(n_rx, psi.nrows()), psi, upsilon: None }
}

/// Large-RIS capacity `E log2 det(I + (M rho / N_t) X upsilon X^H)` with
/// `X` an `N_r x N_t` matrix of i.i.d. CN(0, 1) entries.
pub fn large_m_capacity(
    upsilon: &CMatrix,
    n_rx: usize,
    rho: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<CapacityResult> {
    if is_numerically_zero(upsilon) {
        return Ok(CapacityResult { value: 0.0, kind: BoundKind::Mc, std_error: Some(0.0), trials: Some(trials) });
    }
    let stats = central_stats(n_rx, upsilon * num_complex::Complex64::from(m as f64));
    mc_ecc(&CapacityQuery::new(rho, &stats).with_trials(trials).with_seed(seed))
}

/// Upper bound on [`large_m_capacity`] from the minor expansion of the
/// zero-mean channel with covariance `M upsilon`. Singular `upsilon` is
/// allowed; its vanishing minors drop out.
pub fn large_m_upper_bound(upsilon: &CMatrix, n_rx: usize, rho: f64, m: usize) -> Result<CapacityResult> {
    let nt = upsilon.nrows();
    check_order(nt)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("SNR must be positive and finite, got {rho}")));
    }
    let psi = hermitian_part(upsilon) * num_complex::Complex64::from(m as f64);
    let scale = hermitian_eigenvalues(&psi).first().copied().unwrap_or(0.0).max(0.0);
    let ln_rho_bar = (rho / nt as f64).ln();
    let mut total = LogSum::default();
    total.add(0.0);
    for t in 1..=nt.min(n_rx) {
        let floor = (1e-10 * scale).powi(t as i32);
        let mut level = LogSum::default();
        for q in index_subsets(nt, t) {
            let minor = principal_submatrix(&psi, &q).determinant().re;
            if minor > floor {
                level.add(minor.ln());
            }
        }
        let ln_count = ln_factorial(n_rx) - ln_factorial(n_rx - t);
        total.add(t as f64 * ln_rho_bar + ln_count + level.ln());
    }
    let kind = if n_rx >= nt { BoundKind::UpperC1 } else { BoundKind::UpperC2 };
    Ok(CapacityResult { value: total.ln() / LN_2, kind, std_error: None, trials: None })
}

/// Ergodic capacity with the RIS phases redrawn uniformly for every channel
/// realization, i.e. averaged over random phase configurations.
pub fn random_phase_ecc(
    config: &SystemConfig,
    paths: &PathSet,
    rho: f64,
    trials: usize,
    seed: u64,
) -> Result<CapacityResult> {
    let los = build_los_matrices(config, paths)?;
    let m = config.n_ris();
    let rho_bar = rho / config.n_tx as f64;
    let est = mc_mean(trials, seed, |rng| {
        let phases = PhaseShifts::wrapped((0..m).map(|_| uniform_angle(rng)));
        let real = los.sample_realization(config, &phases, rng)?;
        log2_det_capacity(&real.g, rho_bar)
    })?;
    Ok(CapacityResult {
        value: est.mean,
        kind: BoundKind::Mc,
        std_error: Some(est.std_error),
        trials: Some(est.trials),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Diverges,
    Vanishes,
    Finite,
}

/// Classification of `C(rho M^-alpha)` along an RIS-size grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerScalingVerdict {
    pub alpha: f64,
    pub limit_kind: LimitKind,
    /// Limit of the large-RIS capacity, set for a finite limit.
    pub finite_value: Option<f64>,
    pub trace: Vec<f64>,
}

/// Growth factor over the grid that counts as divergence.
pub const DIVERGENCE_RATIO: f64 = 2.0;
/// Final-to-initial fraction that counts as vanishing.
pub const VANISHING_FRACTION: f64 = 0.05;
/// Relative change between the last two points that counts as a plateau.
pub const PLATEAU_TOLERANCE: f64 = 0.05;

/// Evaluates the large-RIS capacity at transmit power `rho_base M^-alpha`
/// for each `M` in `m_grid` and classifies the trend. Every grid point uses
/// the same random stream.
pub fn power_scaling(
    upsilon: &CMatrix,
    n_rx: usize,
    rho_base: f64,
    alpha: f64,
    m_grid: &[usize],
    trials: usize,
    seed: u64,
) -> Result<PowerScalingVerdict> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("scaling exponent must be >= 0, got {alpha}")));
    }
    if m_grid.len() < 2 || m_grid.windows(2).any(|w| w[0] >= w[1]) || m_grid[0] == 0 {
        return Err(Error::InvalidParameter("RIS-size grid needs two or more increasing positive sizes".into()));
    }
    let trace = m_grid
        .iter()
        .map(|&m| {
            let rho = rho_base * (m as f64).powf(-alpha);
            large_m_capacity(upsilon, n_rx, rho, m, trials, seed).map(|r| r.value)
        })
        .collect::<Result<Vec<_>>>()?;

    let first = trace[0];
    let last = trace[trace.len() - 1];
    let prev = trace[trace.len() - 2];
    let increasing = trace.windows(2).all(|w| w[1] > w[0]);
    let decreasing = trace.windows(2).all(|w| w[1] < w[0]);
    let limit_kind = if increasing && last > DIVERGENCE_RATIO * first {
        LimitKind::Diverges
    } else if decreasing && last < VANISHING_FRACTION * first {
        LimitKind::Vanishes
    } else if prev > 0.0 && ((last - prev) / prev).abs() < PLATEAU_TOLERANCE {
        LimitKind::Finite
    } else {
        return Err(Error::Inconclusive { trace });
    };
    let finite_value = match limit_kind {
        LimitKind::Finite => Some(large_m_capacity(upsilon, n_rx, rho_base, 1, trials, seed)?.value),
        _ => None,
    };
    Ok(PowerScalingVerdict { alpha, limit_kind, finite_value, trace })
}

/// Large-RIS slope and offset for `N_r >= N_t`, where the LoS mean becomes
/// negligible and `psi ~ M upsilon`.
pub fn corollary1_expansion(upsilon: &CMatrix, n_tx: usize, n_rx: usize, m: usize) -> Result<HighSnrExpansion> {
    if upsilon.shape() != (n_tx, n_tx) {
        return Err(Error::InvalidDimension(format!("upsilon is {:?}, expected {n_tx}x{n_tx}", upsilon.shape())));
    }
    if n_rx < n_tx {
        return Err(Error::AssumptionViolated(format!("needs N_r >= N_t, got N_r = {n_rx}, N_t = {n_tx}")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("RIS must have at least one element".into()));
    }
    let upsilon = hermitian_part(upsilon);
    let eig = hermitian_eigenvalues(&upsilon);
    let max = eig.first().copied().unwrap_or(0.0);
    let min = eig.last().copied().unwrap_or(0.0);
    if !(max > 0.0) || min <= 1e-10 * max {
        return Err(Error::AssumptionViolated(format!(
            "upsilon is rank deficient (eigenvalues {min:e} .. {max:e})"
        )));
    }
    let ln_det: f64 = eig.iter().map(|z| z.ln()).sum();
    let nt = n_tx as f64;
    Ok(HighSnrExpansion {
        slope: nt,
        offset: (nt / m as f64).log2() - (ln_det + digamma_sum(n_tx, n_rx)?) / (nt * LN_2),
        offset_bounds: None,
        offset_std_error: None,
    })
}
