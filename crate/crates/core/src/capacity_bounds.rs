//! Ergodic capacity `E log2 det(I + rho/N_t G G^H)`: Monte Carlo estimate
//! and closed-form upper and lower bounds from the channel statistics.
//!
//! The upper bound expands `det(I + x G^H G)` into principal minors and
//! takes the exact expectation of each minor. The lower bound applies
//! Minkowski's determinant inequality and the exact expected log-determinant.

use std::f64::consts::LN_2;
use std::fmt;

use crate::channel_model::{check_positive_definite, EffectiveStats};
use crate::error::{Error, Result};
use crate::experiment::csv::sig;
use crate::linalg::{
    hermitian_eigenvalues, hermitian_part, hermitian_sqrt, ln_1p_exp, ln_det_hpd, ln_det_identity_plus,
    principal_submatrix, CMatrix, LogSum,
};
use crate::matrix_analysis::{
    check_order, digamma_sum, generalized_nonzero_eigs, index_subsets, ln_expected_det, wishart_f, MomentParams,
};
use crate::monte_carlo::mc_mean;
use crate::rng::complex_normal_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Mc,
    UpperC1,
    UpperC2,
    LowerC3,
    LowerC4,
}

impl BoundKind {
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::Mc => "mc",
            BoundKind::UpperC1 => "upper_C1",
            BoundKind::UpperC2 => "upper_C2",
            BoundKind::LowerC3 => "lower_C3",
            BoundKind::LowerC4 => "lower_C4",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A capacity value in bits/s/Hz. `std_error` and `trials` are set only
/// for Monte Carlo estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    pub value: f64,
    pub kind: BoundKind,
    pub std_error: Option<f64>,
    pub trials: Option<usize>,
}

impl CapacityResult {
    fn exact(value: f64, kind: BoundKind) -> Self {
        CapacityResult { value, kind, std_error: None, trials: None }
    }
}

/// One capacity evaluation: SNR `rho = P / sigma^2` (linear) and the
/// channel statistics. Per-antenna SNR is `rho / N_t`.
#[derive(Debug, Clone, Copy)]
pub struct CapacityQuery<'a> {
    pub rho: f64,
    pub stats: &'a EffectiveStats,
    pub mc_trials: usize,
    pub seed: u64,
    pub moments: MomentParams,
}

impl<'a> CapacityQuery<'a> {
    pub fn new(rho: f64, stats: &'a EffectiveStats) -> Self {
        CapacityQuery { rho, stats, mc_trials: 10_000, seed: 0, moments: MomentParams::new(1, 1) }
    }

    pub fn with_trials(self, mc_trials: usize) -> Self {
        CapacityQuery { mc_trials, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        CapacityQuery { seed, ..self }
    }

    pub fn n_tx(&self) -> usize {
        self.stats.n_tx()
    }

    pub fn n_rx(&self) -> usize {
        self.stats.n_rx()
    }

    pub fn rho_bar(&self) -> f64 {
        self.rho / self.n_tx() as f64
    }

    fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("SNR must be positive and finite, got {}", self.rho)));
        }
        let nt = self.n_tx();
        if nt == 0 || self.n_rx() == 0 {
            return Err(Error::InvalidDimension("channel has no antennas".into()));
        }
        if self.stats.psi.shape() != (nt, nt) {
            return Err(Error::InvalidDimension(format!(
                "covariance is {:?} for {nt} transmit antennas",
                self.stats.psi.shape()
            )));
        }
        Ok(())
    }
}

/// `log2 det(I + rho_bar G G^H)`, evaluated on the smaller Gram matrix.
pub fn log2_det_capacity(g: &CMatrix, rho_bar: f64) -> Result<f64> {
    let gram = if g.ncols() <= g.nrows() { g.adjoint() * g } else { g * g.adjoint() };
    Ok(ln_det_identity_plus(&gram, rho_bar)? / LN_2)
}

/// Hermitian square root of a covariance that may be singular but must not
/// be indefinite.
pub(crate) fn psd_sqrt(psi: &CMatrix) -> Result<CMatrix> {
    let psi = hermitian_part(psi);
    let eig = hermitian_eigenvalues(&psi);
    let max = eig.first().copied().unwrap_or(0.0).max(0.0);
    let min = eig.last().copied().unwrap_or(0.0);
    if min < -1e-10 * max.max(f64::MIN_POSITIVE) || !min.is_finite() {
        return Err(Error::SingularCovariance { min_eigenvalue: min });
    }
    Ok(hermitian_sqrt(&psi))
}

/// Monte Carlo ergodic capacity with `G = G_bar + X psi^{1/2}`.
///
/// A positive semidefinite `psi` is accepted, so a deterministic channel
/// (`psi = 0`) gives its exact capacity with zero standard error.
pub fn mc_ecc(query: &CapacityQuery) -> Result<CapacityResult> {
    query.validate()?;
    let root = psd_sqrt(&query.stats.psi)?;
    let g_bar = &query.stats.g_bar;
    let (nr, nt) = g_bar.shape();
    let rho_bar = query.rho_bar();
    let est = mc_mean(query.mc_trials, query.seed, |rng| {
        let g = g_bar + complex_normal_matrix(rng, nr, nt) * &root;
        log2_det_capacity(&g, rho_bar)
    })?;
    Ok(CapacityResult {
        value: est.mean,
        kind: BoundKind::Mc,
        std_error: Some(est.std_error),
        trials: Some(est.trials),
    })
}

/// Upper bound `log2 E det(I + rho_bar G^H G)`: C1 when `N_r >= N_t`, C2
/// otherwise. Minors of order above `min(N_t, N_r)` vanish and are skipped.
pub fn upper_bound(query: &CapacityQuery) -> Result<CapacityResult> {
    query.validate()?;
    let (nr, nt) = query.stats.g_bar.shape();
    check_order(nt)?;
    let psi = hermitian_part(&query.stats.psi);
    check_positive_definite(&psi)?;
    let ln_rho_bar = query.rho_bar().ln();
    let g_bar = &query.stats.g_bar;

    let mut total = LogSum::default();
    total.add(0.0);
    for t in 1..=nt.min(nr) {
        let mut level = LogSum::default();
        for q in index_subsets(nt, t) {
            // Rows of B are the selected columns of G, conjugated.
            let b_bar = CMatrix::from_fn(t, nr, |i, j| g_bar[(j, q[i])].conj());
            let omega = principal_submatrix(&psi, &q);
            level.add(ln_expected_det(&b_bar, &omega, &query.moments)?);
        }
        total.add(t as f64 * ln_rho_bar + level.ln());
    }
    let kind = if nr >= nt { BoundKind::UpperC1 } else { BoundKind::UpperC2 };
    Ok(CapacityResult::exact(total.ln() / LN_2, kind))
}

/// Pieces of `E ln det` of the effective channel's square Gram matrix.
#[derive(Debug, Clone)]
pub(crate) struct LogdetTerms {
    /// `min(N_t, N_r)`.
    pub p: usize,
    /// Digamma sum plus the non-central correction `F`.
    pub shared: f64,
    /// Eigenvalues of `psi`, descending.
    pub zeta: Vec<f64>,
    pub ln_det_psi: f64,
}

pub(crate) fn logdet_terms(stats: &EffectiveStats, moments: &MomentParams) -> Result<LogdetTerms> {
    let (nr, nt) = stats.g_bar.shape();
    let psi = hermitian_part(&stats.psi);
    check_positive_definite(&psi)?;
    let (p, q) = if nr >= nt { (nt, nr) } else { (nr, nt) };
    let params = moments.with_shape(p, q);
    let sigma = stats.g_bar.adjoint() * &stats.g_bar;
    // The non-zero eigenvalues of G_bar psi^{-1} G_bar^H and of the pencil
    // (G_bar^H G_bar, psi) coincide, so one routine serves both regimes.
    let alpha = generalized_nonzero_eigs(&sigma, &psi, &params)?;
    Ok(LogdetTerms {
        p,
        shared: digamma_sum(p, q)? + wishart_f(&alpha, &params)?,
        zeta: hermitian_eigenvalues(&psi),
        ln_det_psi: ln_det_hpd(&psi)?,
    })
}

/// Lower bound: C3 when `N_r >= N_t`, C4 otherwise.
pub fn lower_bound(query: &CapacityQuery) -> Result<CapacityResult> {
    query.validate()?;
    let terms = logdet_terms(query.stats, &query.moments)?;
    let (nr, nt) = query.stats.g_bar.shape();
    let (ln_det, kind) = if nr >= nt {
        (terms.ln_det_psi, BoundKind::LowerC3)
    } else {
        let smallest: f64 = terms.zeta[nt - nr..].iter().map(|z| z.ln()).sum();
        (smallest, BoundKind::LowerC4)
    };
    let p = terms.p as f64;
    let exponent = query.rho_bar().ln() + (ln_det + terms.shared) / p;
    Ok(CapacityResult::exact(p * ln_1p_exp(exponent) / LN_2, kind))
}

/// `(lower, upper)` for the regime of the query. `N_r = N_t` uses C3/C1.
pub fn bound_pair(query: &CapacityQuery) -> Result<(CapacityResult, CapacityResult)> {
    Ok((lower_bound(query)?, upper_bound(query)?))
}

/// Long-format CSV: `rho_db,kind,value,std_error,trials`. Missing fields
/// are left empty.
pub fn results_csv(rows: &[(f64, CapacityResult)]) -> String {
    let mut out = String::from("rho_db,kind,value,std_error,trials\n");
    for (rho_db, r) in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig(*rho_db),
            r.kind,
            sig(r.value),
            r.std_error.map(sig).unwrap_or_default(),
            r.trials.map(|n| n.to_string()).unwrap_or_default()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_model::{sample_path_set, PhaseShifts, SystemConfig};
    use crate::rng::stream_rng;
    use num_complex::Complex64;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn scalar_stats(g: f64, psi: f64) -> EffectiveStats {
        EffectiveStats {
            g_bar: CMatrix::from_element(1, 1, Complex64::new(g, 0.0)),
            psi: CMatrix::from_element(1, 1, Complex64::new(psi, 0.0)),
            upsilon: None,
        }
    }

    fn system_stats(nt: usize, nr: usize, seed: u64) -> EffectiveStats {
        let config = SystemConfig { n_tx: nt, n_rx: nr, ..SystemConfig::default() };
        let mut rng = stream_rng(seed, 0);
        let paths = sample_path_set(&config, &mut rng);
        let phases = PhaseShifts::wrapped((0..config.n_ris()).map(|i| 0.7 * i as f64));
        crate::channel_model::effective_stats(&config, &paths, &phases).unwrap()
    }

    #[test]
    fn scalar_upper_closed_form() {
        let stats = scalar_stats(0.8, 1.7);
        let q = CapacityQuery::new(3.0, &stats);
        let u = upper_bound(&q).unwrap();
        assert_eq!(u.kind, BoundKind::UpperC1);
        let expected = (1.0f64 + 3.0 * (1.7 + 0.64)).log2();
        assert!((u.value - expected).abs() < 1e-12, "{} vs {expected}", u.value);
    }

    #[test]
    fn scalar_lower_central_closed_form() {
        let stats = scalar_stats(0.0, 1.0);
        let q = CapacityQuery::new(10.0, &stats);
        let l = lower_bound(&q).unwrap();
        let expected = (1.0 + 10.0 * (-EULER_GAMMA).exp()).log2();
        assert!((l.value - expected).abs() < 1e-12);
    }

    #[test]
    fn low_snr_vanishes() {
        let stats = system_stats(2, 3, 1);
        let q = CapacityQuery::new(1e-9, &stats).with_trials(2000);
        let (l, u) = bound_pair(&q).unwrap();
        let mc = mc_ecc(&q).unwrap();
        for v in [l.value, u.value, mc.value] {
            assert!(v >= 0.0 && v < 1e-6, "{v}");
        }
    }

    #[test]
    fn regime_dispatch() {
        let tall = system_stats(2, 4, 2);
        let wide = system_stats(4, 2, 3);
        let square = system_stats(3, 3, 4);
        let kinds = |s: &EffectiveStats| {
            let (l, u) = bound_pair(&CapacityQuery::new(10.0, s)).unwrap();
            (l.kind, u.kind)
        };
        assert_eq!(kinds(&tall), (BoundKind::LowerC3, BoundKind::UpperC1));
        assert_eq!(kinds(&wide), (BoundKind::LowerC4, BoundKind::UpperC2));
        assert_eq!(kinds(&square), (BoundKind::LowerC3, BoundKind::UpperC1));
    }

    #[test]
    fn deterministic_channel_is_exact() {
        let mut stats = system_stats(2, 3, 5);
        stats.psi = CMatrix::zeros(2, 2);
        let q = CapacityQuery::new(4.0, &stats).with_trials(100);
        let mc = mc_ecc(&q).unwrap();
        let exact = log2_det_capacity(&stats.g_bar, 2.0).unwrap();
        assert!((mc.value - exact).abs() < 1e-12);
        assert_eq!(mc.std_error, Some(0.0));
        assert!(matches!(upper_bound(&q), Err(Error::SingularCovariance { .. })));
    }

    #[test]
    fn rejects_bad_queries() {
        let stats = scalar_stats(1.0, 1.0);
        assert!(upper_bound(&CapacityQuery::new(0.0, &stats)).is_err());
        assert!(mc_ecc(&CapacityQuery::new(1.0, &stats).with_trials(0)).is_err());
        let mut indefinite = stats.clone();
        indefinite.psi[(0, 0)] = Complex64::new(-1.0, 0.0);
        assert!(mc_ecc(&CapacityQuery::new(1.0, &indefinite)).is_err());
    }

    #[test]
    fn csv_layout() {
        let r = CapacityResult { value: 1.5, kind: BoundKind::Mc, std_error: Some(0.01), trials: Some(10) };
        let u = CapacityResult::exact(2.0, BoundKind::UpperC2);
        let text = results_csv(&[(10.0, r), (10.0, u)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "rho_db,kind,value,std_error,trials");
        assert_eq!(lines[1], "10,mc,1.5,0.01,10");
        assert_eq!(lines[2], "10,upper_C2,2,,");
    }
}
