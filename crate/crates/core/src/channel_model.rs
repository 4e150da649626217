//! RIS-aided MIMO Rician channel: steering vectors, LoS path sets, channel
//! realizations and the exact mean/covariance of the effective channel.
//!
//! The effective channel is `G = sqrt(bt br) R Phi T + sqrt(bd) H`, where
//! `T` (transmitter to RIS) is pure LoS and `R`, `H` are Rician. Conditioned
//! on the LoS realization, the rows of `G` are independent with mean given by
//! the rows of `g_bar` and covariance `psi` (for every column of `G^H`).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_part, CMatrix, CVector};
use crate::rng::{complex_normal, complex_normal_matrix, uniform_angle};

/// Geometry, path-loss and fading parameters of one RIS-aided link.
///
/// Spacings are ratios `d / lambda`. The NLoS power fractions are always
/// `1 - los_power_*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub n_tx: usize,
    pub n_rx: usize,
    /// RIS elements per row.
    pub m_h: usize,
    /// RIS elements per column.
    pub m_v: usize,
    pub d_t: f64,
    pub d_r: f64,
    pub d_h: f64,
    pub d_v: f64,
    pub beta_t: f64,
    pub beta_r: f64,
    pub beta_d: f64,
    pub los_power_r: f64,
    pub los_power_h: f64,
    pub n_paths_t: usize,
    pub n_paths_r: usize,
    pub n_paths_h: usize,
}

impl Default for SystemConfig {
    /// Half-wavelength spacing, unit path loss, one LoS path on each RIS
    /// hop, two on the direct link, 2/3 of the power in LoS, a 4x4 RIS and
    /// a 2x4 MIMO link.
    fn default() -> Self {
        SystemConfig {
            n_tx: 2,
            n_rx: 4,
            m_h: 4,
            m_v: 4,
            d_t: 0.5,
            d_r: 0.5,
            d_h: 0.5,
            d_v: 0.5,
            beta_t: 1.0,
            beta_r: 1.0,
            beta_d: 1.0,
            los_power_r: 2.0 / 3.0,
            los_power_h: 2.0 / 3.0,
            n_paths_t: 1,
            n_paths_r: 1,
            n_paths_h: 2,
        }
    }
}

impl SystemConfig {
    /// Number of reflecting elements `M = m_h * m_v`.
    pub fn n_ris(&self) -> usize {
        self.m_h * self.m_v
    }

    pub fn nlos_power_r(&self) -> f64 {
        1.0 - self.los_power_r
    }

    pub fn nlos_power_h(&self) -> f64 {
        1.0 - self.los_power_h
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_tx", self.n_tx),
            ("n_rx", self.n_rx),
            ("m_h", self.m_h),
            ("m_v", self.m_v),
            ("n_paths_t", self.n_paths_t),
            ("n_paths_r", self.n_paths_r),
            ("n_paths_h", self.n_paths_h),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        let nonneg = [
            ("d_t", self.d_t),
            ("d_r", self.d_r),
            ("d_h", self.d_h),
            ("d_v", self.d_v),
            ("beta_t", self.beta_t),
            ("beta_r", self.beta_r),
            ("beta_d", self.beta_d),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        for (name, v) in [("los_power_r", self.los_power_r), ("los_power_h", self.los_power_h)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }

    /// Same system with the RIS hops switched off (`beta_t = 0`).
    pub fn without_ris(&self) -> SystemConfig {
        SystemConfig { beta_t: 0.0, ..self.clone() }
    }

    /// Same system with a different RIS column count.
    pub fn with_ris_columns(&self, m_v: usize) -> SystemConfig {
        SystemConfig { m_v, ..self.clone() }
    }
}

/// One LoS path from the transmitter to the RIS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxRisPath {
    pub gain: Complex64,
    /// Azimuth angle of arrival at the RIS.
    pub azimuth: f64,
    /// Elevation angle of arrival at the RIS.
    pub elevation: f64,
    /// Angle of departure at the transmit ULA.
    pub departure: f64,
}

/// One LoS path from the RIS to the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisRxPath {
    pub gain: Complex64,
    /// Angle of arrival at the receive ULA.
    pub arrival: f64,
    /// Azimuth angle of departure from the RIS.
    pub azimuth: f64,
    /// Elevation angle of departure from the RIS.
    pub elevation: f64,
}

/// One LoS path on the direct transmitter-receiver link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectPath {
    pub gain: Complex64,
    pub arrival: f64,
    pub departure: f64,
}

/// The sampled LoS geometry of one drop. Held fixed while NLoS fading is
/// redrawn.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    pub tx_ris: Vec<TxRisPath>,
    pub ris_rx: Vec<RisRxPath>,
    pub direct: Vec<DirectPath>,
}

/// RIS reflection phases, each in `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShifts(Vec<f64>);

/// Maps any real angle into `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

impl PhaseShifts {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = theta.iter().find(|&&t| !(t > -PI && t <= PI)) {
            return Err(Error::InvalidPhase { value: bad });
        }
        Ok(PhaseShifts(theta))
    }

    /// Wraps every entry into `(-pi, pi]` first.
    pub fn wrapped(theta: impl IntoIterator<Item = f64>) -> Self {
        PhaseShifts(theta.into_iter().map(wrap_phase).collect())
    }

    /// `Phi = I`.
    pub fn zeros(m: usize) -> Self {
        PhaseShifts(vec![0.0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Diagonal of `Phi`.
    pub fn reflection(&self) -> Vec<Complex64> {
        self.0.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
    }
}

/// Deterministic LoS matrices of one drop.
#[derive(Debug, Clone)]
pub struct LosMatrices {
    /// Transmitter to RIS, `M x N_t`.
    pub t: CMatrix,
    /// LoS part of the RIS-receiver channel, `N_r x M`.
    pub r_bar: CMatrix,
    /// LoS part of the direct channel, `N_r x N_t`.
    pub h_bar: CMatrix,
}

#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub t: CMatrix,
    pub r: CMatrix,
    pub h: CMatrix,
    /// Assembled effective channel, `N_r x N_t`.
    pub g: CMatrix,
}

/// First- and second-order statistics of the effective channel.
#[derive(Debug, Clone)]
pub struct EffectiveStats {
    /// Mean of `G`, `N_r x N_t`.
    pub g_bar: CMatrix,
    /// Covariance of every column of `G^H`, `N_t x N_t`.
    pub psi: CMatrix,
    /// Large-RIS limit of `psi / M`, when computed.
    pub upsilon: Option<CMatrix>,
}

impl EffectiveStats {
    pub fn n_tx(&self) -> usize {
        self.g_bar.ncols()
    }

    pub fn n_rx(&self) -> usize {
        self.g_bar.nrows()
    }
}

/// ULA steering vector: entry `k` is `exp(j 2 pi spacing k sin(angle))`.
pub fn ula_response(n: usize, spacing: f64, angle: f64) -> Result<CVector> {
    if n == 0 {
        return Err(Error::InvalidDimension("ULA needs at least one element".into()));
    }
    Ok(progression(n, TAU * spacing * angle.sin()))
}

/// UPA steering vector, ordered `vertical ⊗ horizontal`: entry
/// `kv * m_h + kh` carries phase `2 pi (d_v kv sin(el) + d_h kh cos(el) sin(az))`.
pub fn upa_response(
    m_h: usize,
    m_v: usize,
    d_h: f64,
    d_v: f64,
    azimuth: f64,
    elevation: f64,
) -> Result<CVector> {
    if m_h == 0 || m_v == 0 {
        return Err(Error::InvalidDimension(format!("UPA dimensions must be positive, got {m_h}x{m_v}")));
    }
    let vertical = progression(m_v, TAU * d_v * elevation.sin());
    let horizontal = progression(m_h, TAU * d_h * elevation.cos() * azimuth.sin());
    Ok(vertical.kronecker(&horizontal))
}

fn progression(n: usize, step: f64) -> CVector {
    CVector::from_fn(n, |k, _| Complex64::from_polar(1.0, step * k as f64))
}

/// Draws a fresh LoS geometry: CN(0, 1) gains and angles uniform on `[0, 2 pi)`.
pub fn sample_path_set<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> PathSet {
    let tx_ris = (0..config.n_paths_t)
        .map(|_| TxRisPath {
            gain: complex_normal(rng),
            azimuth: uniform_angle(rng),
            elevation: uniform_angle(rng),
            departure: uniform_angle(rng),
        })
        .collect();
    let ris_rx = (0..config.n_paths_r)
        .map(|_| RisRxPath {
            gain: complex_normal(rng),
            arrival: uniform_angle(rng),
            azimuth: uniform_angle(rng),
            elevation: uniform_angle(rng),
        })
        .collect();
    let direct = (0..config.n_paths_h)
        .map(|_| DirectPath {
            gain: complex_normal(rng),
            arrival: uniform_angle(rng),
            departure: uniform_angle(rng),
        })
        .collect();
    PathSet { tx_ris, ris_rx, direct }
}

fn check_paths(config: &SystemConfig, paths: &PathSet) -> Result<()> {
    let found = (paths.tx_ris.len(), paths.ris_rx.len(), paths.direct.len());
    let expected = (config.n_paths_t, config.n_paths_r, config.n_paths_h);
    if found != expected {
        return Err(Error::InvalidDimension(format!(
            "path counts {found:?} do not match configuration {expected:?}"
        )));
    }
    Ok(())
}

/// Sum of scaled outer products `a b^T` (plain transpose, no conjugate).
fn outer_sum(rows: usize, cols: usize, terms: impl Iterator<Item = (Complex64, CVector, CVector)>) -> CMatrix {
    let mut acc = CMatrix::zeros(rows, cols);
    for (w, a, b) in terms {
        acc += (a * b.transpose()).map(|z| z * w);
    }
    acc
}

/// Builds `T`, `R_bar` and `H_bar` from the LoS geometry.
pub fn build_los_matrices(config: &SystemConfig, paths: &PathSet) -> Result<LosMatrices> {
    config.validate()?;
    check_paths(config, paths)?;
    let m = config.n_ris();
    let (nt, nr) = (config.n_tx, config.n_rx);
    let norm_t = 1.0 / (config.n_paths_t as f64).sqrt();
    let norm_r = 1.0 / (config.n_paths_r as f64).sqrt();
    let norm_h = 1.0 / (config.n_paths_h as f64).sqrt();

    let t_terms = paths
        .tx_ris
        .iter()
        .map(|p| -> Result<_> {
            Ok((
                p.gain * norm_t,
                upa_response(config.m_h, config.m_v, config.d_h, config.d_v, p.azimuth, p.elevation)?,
                ula_response(nt, config.d_t, p.departure)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let r_terms = paths
        .ris_rx
        .iter()
        .map(|p| -> Result<_> {
            Ok((
                p.gain * norm_r,
                ula_response(nr, config.d_r, p.arrival)?,
                upa_response(config.m_h, config.m_v, config.d_h, config.d_v, p.azimuth, p.elevation)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let h_terms = paths
        .direct
        .iter()
        .map(|p| -> Result<_> {
            Ok((p.gain * norm_h, ula_response(nr, config.d_r, p.arrival)?, ula_response(nt, config.d_t, p.departure)?))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(LosMatrices {
        t: outer_sum(m, nt, t_terms.into_iter()),
        r_bar: outer_sum(nr, m, r_terms.into_iter()),
        h_bar: outer_sum(nr, nt, h_terms.into_iter()),
    })
}

fn check_phases(config: &SystemConfig, phases: &PhaseShifts) -> Result<()> {
    if phases.len() != config.n_ris() {
        return Err(Error::InvalidDimension(format!(
            "{} phase shifts for an RIS with {} elements",
            phases.len(),
            config.n_ris()
        )));
    }
    Ok(())
}

/// `R Phi`: scales column `m` of `r` by `exp(j theta_m)`.
fn reflect(r: &CMatrix, phases: &PhaseShifts) -> CMatrix {
    let mut out = r.clone();
    for (j, phi) in phases.reflection().into_iter().enumerate() {
        out.column_mut(j).iter_mut().for_each(|z| *z *= phi);
    }
    out
}

/// `sqrt(bt br) R Phi T + sqrt(bd) H`.
pub fn assemble_effective(
    config: &SystemConfig,
    t: &CMatrix,
    r: &CMatrix,
    h: &CMatrix,
    phases: &PhaseShifts,
) -> Result<CMatrix> {
    check_phases(config, phases)?;
    let ris = reflect(r, phases) * t;
    let a = Complex64::from((config.beta_t * config.beta_r).sqrt());
    let b = Complex64::from(config.beta_d.sqrt());
    Ok(ris * a + h * b)
}

/// Draws one channel realization: fresh NLoS fading on `R` and `H`, LoS
/// parts and `T` fixed by `paths`.
pub fn sample_realization<R: Rng + ?Sized>(
    config: &SystemConfig,
    paths: &PathSet,
    phases: &PhaseShifts,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let los = build_los_matrices(config, paths)?;
    los.sample_realization(config, phases, rng)
}

/// Exact mean and covariance of the effective channel.
pub fn effective_stats(config: &SystemConfig, paths: &PathSet, phases: &PhaseShifts) -> Result<EffectiveStats> {
    build_los_matrices(config, paths)?.effective_stats(config, phases)
}

/// Large-RIS covariance limit `lim psi / M`.
pub fn upsilon(config: &SystemConfig, paths: &PathSet) -> Result<CMatrix> {
    config.validate()?;
    check_paths(config, paths)?;
    let nt = config.n_tx;
    let scale = config.beta_t * config.beta_r * config.nlos_power_r() / config.n_paths_t as f64;
    let mut acc = CMatrix::zeros(nt, nt);
    for p in &paths.tx_ris {
        let a = ula_response(nt, config.d_t, p.departure)?;
        let w = Complex64::from(scale * p.gain.norm_sqr());
        acc += (a.conjugate() * a.transpose()).map(|z| z * w);
    }
    Ok(hermitian_part(&acc))
}

impl LosMatrices {
    pub fn sample_realization<R: Rng + ?Sized>(
        &self,
        config: &SystemConfig,
        phases: &PhaseShifts,
        rng: &mut R,
    ) -> Result<ChannelRealization> {
        check_phases(config, phases)?;
        let (nr, nt, m) = (config.n_rx, config.n_tx, config.n_ris());
        let lr = Complex64::from(config.los_power_r.sqrt());
        let nlr = Complex64::from(config.nlos_power_r().sqrt());
        let lh = Complex64::from(config.los_power_h.sqrt());
        let nlh = Complex64::from(config.nlos_power_h().sqrt());
        let r = &self.r_bar * lr + complex_normal_matrix(rng, nr, m) * nlr;
        let h = &self.h_bar * lh + complex_normal_matrix(rng, nr, nt) * nlh;
        let g = assemble_effective(config, &self.t, &r, &h, phases)?;
        Ok(ChannelRealization { t: self.t.clone(), r, h, g })
    }

    /// Mean of `G` for the given phases. `psi` does not depend on them.
    pub fn mean_channel(&self, config: &SystemConfig, phases: &PhaseShifts) -> Result<CMatrix> {
        check_phases(config, phases)?;
        let a = Complex64::from((config.beta_t * config.beta_r * config.los_power_r).sqrt());
        let b = Complex64::from((config.beta_d * config.los_power_h).sqrt());
        Ok(reflect(&self.r_bar, phases) * &self.t * a + &self.h_bar * b)
    }

    /// Transmit covariance `bt br N_R T^H T + bd N_H I`, exactly Hermitian.
    /// Fails when it is not numerically positive definite.
    pub fn covariance(&self, config: &SystemConfig) -> Result<CMatrix> {
        let nt = config.n_tx;
        let ris = config.beta_t * config.beta_r * config.nlos_power_r();
        let direct = config.beta_d * config.nlos_power_h();
        let psi = self.t.adjoint() * &self.t * Complex64::from(ris)
            + CMatrix::identity(nt, nt) * Complex64::from(direct);
        let psi = hermitian_part(&psi);
        check_positive_definite(&psi)?;
        Ok(psi)
    }

    pub fn effective_stats(&self, config: &SystemConfig, phases: &PhaseShifts) -> Result<EffectiveStats> {
        Ok(EffectiveStats {
            g_bar: self.mean_channel(config, phases)?,
            psi: self.covariance(config)?,
            upsilon: None,
        })
    }
}

/// Relative eigenvalue floor below which a covariance is treated as singular.
pub const PD_RELATIVE_FLOOR: f64 = 1e-12;

pub(crate) fn check_positive_definite(psi: &CMatrix) -> Result<()> {
    let eig = hermitian_eigenvalues(psi);
    let max = eig.first().copied().unwrap_or(0.0);
    let min = eig.last().copied().unwrap_or(0.0);
    if !(max > 0.0) || min <= PD_RELATIVE_FLOOR * max {
        return Err(Error::SingularCovariance { min_eigenvalue: min });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;
    use crate::rng::stream_rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &CVector, b: &[Complex64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn ula_examples() {
        assert!(close(&ula_response(4, 0.5, 0.0).unwrap(), &[c(1.0, 0.0); 4]));
        assert!(close(&ula_response(1, 0.5, 1.2).unwrap(), &[c(1.0, 0.0)]));
        assert!(close(&ula_response(2, 0.5, PI / 2.0).unwrap(), &[c(1.0, 0.0), c(-1.0, 0.0)]));
        assert!(matches!(ula_response(0, 0.5, 0.0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn upa_examples() {
        assert!(close(&upa_response(2, 2, 0.3, 0.7, 0.0, 0.0).unwrap(), &[c(1.0, 0.0); 4]));
        assert!(close(&upa_response(2, 1, 0.5, 0.5, PI / 2.0, 0.0).unwrap(), &[c(1.0, 0.0), c(-1.0, 0.0)]));
        let degenerate = upa_response(1, 5, 0.4, 0.3, 0.9, 1.1).unwrap();
        let ula = ula_response(5, 0.3, 1.1).unwrap();
        assert!(close(&degenerate, ula.as_slice()));
        assert!(upa_response(0, 3, 0.5, 0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn upa_orders_vertical_outer() {
        // Horizontal index runs fastest.
        let (mh, mv, dh, dv, az, el) = (3, 2, 0.5, 0.25, 0.4, 0.8);
        let v = upa_response(mh, mv, dh, dv, az, el).unwrap();
        for kv in 0..mv {
            for kh in 0..mh {
                let phase = TAU * (dv * kv as f64 * el.sin() + dh * kh as f64 * el.cos() * az.sin());
                assert!((v[kv * mh + kh] - Complex64::from_polar(1.0, phase)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!(PhaseShifts::new(vec![-PI]).is_err());
        assert!(PhaseShifts::new(vec![PI, 0.0]).is_ok());
    }

    #[test]
    fn single_path_all_zero_angles_gives_ones() {
        let config = SystemConfig { n_paths_t: 1, ..SystemConfig::default() };
        let mut paths = sample_path_set(&config, &mut stream_rng(1, 0));
        paths.tx_ris[0] = TxRisPath { gain: c(1.0, 0.0), azimuth: 0.0, elevation: 0.0, departure: 0.0 };
        let los = build_los_matrices(&config, &paths).unwrap();
        assert_eq!(los.t.shape(), (16, 2));
        assert!(los.t.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn coherent_direct_paths_add_up() {
        let config = SystemConfig { n_paths_h: 2, ..SystemConfig::default() };
        let mut paths = sample_path_set(&config, &mut stream_rng(2, 0));
        let p = paths.direct[0];
        paths.direct[1] = p;
        let los = build_los_matrices(&config, &paths).unwrap();
        let a = ula_response(config.n_rx, config.d_r, p.arrival).unwrap();
        let b = ula_response(config.n_tx, config.d_t, p.departure).unwrap();
        let expected = (a * b.transpose()).map(|z| z * p.gain * 2f64.sqrt());
        assert!(frobenius(&(los.h_bar - expected)) < 1e-12);
    }

    #[test]
    fn path_count_mismatch_is_rejected() {
        let config = SystemConfig::default();
        let mut paths = sample_path_set(&config, &mut stream_rng(3, 0));
        paths.direct.pop();
        assert!(matches!(build_los_matrices(&config, &paths), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn no_nlos_makes_channel_deterministic() {
        let config = SystemConfig { los_power_r: 1.0, los_power_h: 1.0, ..SystemConfig::default() };
        let paths = sample_path_set(&config, &mut stream_rng(4, 0));
        let phases = PhaseShifts::wrapped((0..16).map(|k| k as f64));
        let los = build_los_matrices(&config, &paths).unwrap();
        let g_bar = los.mean_channel(&config, &phases).unwrap();
        let real = los.sample_realization(&config, &phases, &mut stream_rng(4, 1)).unwrap();
        assert!(frobenius(&(real.g - g_bar)) < 1e-12);
        // Psi is identically zero here.
        assert!(matches!(los.covariance(&config), Err(Error::SingularCovariance { .. })));
    }

    #[test]
    fn zero_ris_gain_removes_ris() {
        let config = SystemConfig { beta_t: 0.0, beta_d: 2.0, ..SystemConfig::default() };
        let paths = sample_path_set(&config, &mut stream_rng(5, 0));
        let phases = PhaseShifts::zeros(16);
        let real = sample_realization(&config, &paths, &phases, &mut stream_rng(5, 1)).unwrap();
        assert!(frobenius(&(&real.g - real.h.map(|z| z * 2f64.sqrt()))) < 1e-12);

        let stats = effective_stats(&config, &paths, &phases).unwrap();
        let nh = config.nlos_power_h();
        let expected_psi = CMatrix::identity(2, 2).map(|z| z * 2.0 * nh);
        assert!(frobenius(&(stats.psi - expected_psi)) < 1e-12);
        let los = build_los_matrices(&config, &paths).unwrap();
        let expected_mean = los.h_bar.map(|z| z * (2.0 * config.los_power_h).sqrt());
        assert!(frobenius(&(stats.g_bar - expected_mean)) < 1e-12);
        assert!(frobenius(&upsilon(&config, &paths).unwrap()) == 0.0);
    }

    #[test]
    fn assembly_identity_holds() {
        let config = SystemConfig { beta_t: 0.7, beta_r: 1.3, beta_d: 0.4, ..SystemConfig::default() };
        let paths = sample_path_set(&config, &mut stream_rng(6, 0));
        let phases = PhaseShifts::wrapped((0..16).map(|k| 0.37 * k as f64));
        let real = sample_realization(&config, &paths, &phases, &mut stream_rng(6, 1)).unwrap();
        let phi = CMatrix::from_diagonal(&CVector::from_vec(phases.reflection()));
        let direct = (&real.r * phi * &real.t).map(|z| z * (0.7f64 * 1.3).sqrt()) + real.h.map(|z| z * 0.4f64.sqrt());
        assert!(frobenius(&(real.g - direct)) < 1e-12);
    }

    #[test]
    fn single_path_upsilon_is_rank_one() {
        let config = SystemConfig { n_tx: 3, ..SystemConfig::default() };
        let paths = sample_path_set(&config, &mut stream_rng(7, 0));
        let ups = upsilon(&config, &paths).unwrap();
        let t1 = paths.tx_ris[0].gain.norm_sqr();
        let trace: f64 = ups.diagonal().iter().map(|z| z.re).sum();
        let expected = config.nlos_power_r() * t1 * 3.0;
        assert!((trace - expected).abs() < 1e-12 * expected.max(1.0));
        let eig = hermitian_eigenvalues(&ups);
        assert!(eig[1].abs() < 1e-12 * eig[0]);
    }

    #[test]
    fn wrong_phase_count_is_rejected() {
        let config = SystemConfig::default();
        let paths = sample_path_set(&config, &mut stream_rng(8, 0));
        assert!(effective_stats(&config, &paths, &PhaseShifts::zeros(3)).is_err());
    }
}
