//! Self-check suites comparing the closed forms with direct sampling.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::asymptotics::slope_empirical;
use crate::capacity_bounds::{bound_pair, mc_ecc, CapacityQuery};
use crate::channel_model::{effective_stats, PhaseShifts};
use crate::error::Result;
use crate::linalg::{hermitian_part, CMatrix};
use crate::matrix_analysis::{
    digamma, expected_det, expected_logdet, generalized_nonzero_eigs, logdet_sandwich, principal_minor_sum,
    MomentParams,
};
use crate::monte_carlo::mc_mean;
use crate::rng::{complex_normal_matrix, derive_seed, stream_rng, StreamRng};

use super::commands::experiment_paths;
use super::config::ExperimentConfig;

/// Z-score above which a sampled comparison fails.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, Default)]
pub struct ValidateOptions {
    /// Scales every closed-form determinant moment by 1.01, to confirm the
    /// suite catches a wrong `J`.
    pub inject_j_bug: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub suites: Vec<SuiteResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(out, "{} {:<20} {}", if s.passed { "PASS" } else { "FAIL" }, s.name, s.detail);
        }
        let _ = writeln!(out, "{}", if self.passed() { "all suites passed" } else { "validation FAILED" });
        out
    }
}

fn random_covariance(rng: &mut StreamRng, n: usize) -> CMatrix {
    let x = complex_normal_matrix(rng, n, n);
    hermitian_part(&(&x * x.adjoint() + CMatrix::identity(n, n) * Complex64::from(0.5)))
}

/// `B = B_bar + L W` with `L L^H = omega`.
fn sample_b(rng: &mut StreamRng, b_bar: &CMatrix, chol: &CMatrix) -> CMatrix {
    let (p, q) = b_bar.shape();
    b_bar + chol * complex_normal_matrix(rng, p, q)
}

const SHAPES: [(usize, usize); 6] = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

fn minor_suite(seed: u64) -> SuiteResult {
    let mut rng = stream_rng(seed, 0);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=6 {
        for _ in 0..4 {
            let a = complex_normal_matrix(&mut rng, n, n);
            for lambda in [0.01, 1.0, 100.0] {
                let direct = (CMatrix::identity(n, n) + a.map(|z| z * lambda)).determinant();
                let sum: Complex64 = (0..=n)
                    .map(|t| principal_minor_sum(&a, t).unwrap_or(Complex64::new(f64::NAN, 0.0)) * lambda.powi(t as i32))
                    .sum();
                worst = worst.max((sum - direct).norm() / direct.norm());
                cases += 1;
            }
        }
    }
    SuiteResult {
        name: "minor_expansion",
        passed: worst <= 1e-9,
        detail: format!("cases={cases} max_rel_err={worst:.3e} limit=1e-9"),
    }
}

fn moment_suite(name: &'static str, seed: u64, trials: usize, log: bool, options: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = stream_rng(seed, 0);
    let mut worst_z: f64 = 0.0;
    let mut worst_se: f64 = 0.0;
    let mut passed = true;
    for (k, &(p, q)) in SHAPES.iter().enumerate() {
        let b_bar = complex_normal_matrix(&mut rng, p, q);
        let omega = random_covariance(&mut rng, p);
        let chol = omega.clone().cholesky().map(|c| c.l()).unwrap_or_else(|| CMatrix::identity(p, p));
        let params = MomentParams::new(p, q);
        let closed = if log {
            // Whitened mean and the covariance log-determinant.
            let eigs = generalized_nonzero_eigs(&(&b_bar * b_bar.adjoint()), &omega, &params)?;
            expected_logdet(&eigs, &params)? + crate::linalg::ln_det_hpd(&omega)?
        } else {
            let v = expected_det(&b_bar, &omega, &params)?;
            if options.inject_j_bug {
                v * 1.01
            } else {
                v
            }
        };
        let est = mc_mean(trials, derive_seed(seed, k as u64 + 1), |rng| {
            let b = sample_b(rng, &b_bar, &chol);
            let det = (&b * b.adjoint()).determinant().re;
            Ok(if log { det.ln() } else { det })
        })?;
        let z = (closed - est.mean).abs() / est.std_error;
        passed &= z <= Z_LIMIT;
        if z > worst_z {
            worst_z = z;
            worst_se = est.std_error;
        }
    }
    Ok(SuiteResult {
        name,
        passed,
        detail: format!(
            "cases={} trials={trials} max_z={worst_z:.2} se_at_max={worst_se:.3e} limit={Z_LIMIT}",
            SHAPES.len()
        ),
    })
}

fn anchor_suite() -> Result<SuiteResult> {
    let err = (digamma(1.0)? + 0.577_215_664_901_532_9).abs();
    Ok(SuiteResult {
        name: "digamma_anchor",
        passed: err <= 1e-12,
        detail: format!("abs_err={err:.3e} limit=1e-12"),
    })
}

fn sandwich_suite(seed: u64) -> Result<SuiteResult> {
    let mut rng = stream_rng(seed, 0);
    let mut violations = 0;
    let draws = 300;
    for k in 0..draws {
        let q = 1 + k % 6;
        let p = 1 + (k / 6) % q;
        let x = complex_normal_matrix(&mut rng, p, q);
        let z = random_covariance(&mut rng, q);
        let zeta = crate::linalg::hermitian_eigenvalues(&z);
        let (lo, hi) = logdet_sandwich(p, &zeta)?;
        let base = crate::linalg::ln_det_hpd(&hermitian_part(&(&x * x.adjoint())))?;
        let mid = crate::linalg::ln_det_hpd(&hermitian_part(&(&x * &z * x.adjoint())))?;
        let tol = 1e-9 * (1.0 + mid.abs());
        if mid < base + lo - tol || mid > base + hi + tol {
            violations += 1;
        }
    }
    Ok(SuiteResult {
        name: "logdet_sandwich",
        passed: violations == 0,
        detail: format!("draws={draws} violations={violations}"),
    })
}

fn bounds_suite(cfg: &ExperimentConfig, seed: u64) -> Result<SuiteResult> {
    let paths = experiment_paths(cfg);
    let stats = effective_stats(&cfg.system, &paths, &PhaseShifts::zeros(cfg.system.n_ris()))?;
    let trials = cfg.mc_trials;
    let mut passed = true;
    let mut worst_se: f64 = 0.0;
    for db in [0.0, 10.0, 20.0, 30.0] {
        let q = CapacityQuery::new(10f64.powf(db / 10.0), &stats).with_trials(trials).with_seed(seed);
        let mc = mc_ecc(&q)?;
        let se = mc.std_error.unwrap_or(0.0);
        let (lo, hi) = bound_pair(&q)?;
        passed &= lo.value <= mc.value + Z_LIMIT * se && mc.value <= hi.value + Z_LIMIT * se;
        worst_se = worst_se.max(se);
    }
    Ok(SuiteResult {
        name: "bound_ordering",
        passed,
        detail: format!("snr_db=0,10,20,30 trials={trials} max_se={worst_se:.3e}"),
    })
}

fn slope_suite(cfg: &ExperimentConfig, seed: u64) -> Result<SuiteResult> {
    let paths = experiment_paths(cfg);
    let stats = effective_stats(&cfg.system, &paths, &PhaseShifts::zeros(cfg.system.n_ris()))?;
    let slope = slope_empirical(&stats, 1e3, 1e4, cfg.mc_trials, seed)?;
    let target = cfg.system.n_tx.min(cfg.system.n_rx) as f64;
    let rel = (slope / target - 1.0).abs();
    Ok(SuiteResult {
        name: "high_snr_slope",
        passed: rel <= 0.05,
        detail: format!("slope={slope:.4} target={target} rel_err={rel:.3e} trials={}", cfg.mc_trials),
    })
}

/// Runs every suite. Errors inside a suite are reported as failures.
pub fn cmd_validate(cfg: &ExperimentConfig, options: &ValidateOptions) -> Result<ValidationReport> {
    cfg.validate()?;
    let seed = |label: u64| derive_seed(cfg.seed, 100 + label);
    let failed = |name: &'static str, e: crate::Error| SuiteResult { name, passed: false, detail: format!("error: {e}") };
    let suites = vec![
        minor_suite(seed(1)),
        moment_suite("expected_det", seed(2), cfg.validate_trials, false, options)
            .unwrap_or_else(|e| failed("expected_det", e)),
        moment_suite("expected_logdet", seed(3), cfg.validate_trials, true, options)
            .unwrap_or_else(|e| failed("expected_logdet", e)),
        anchor_suite().unwrap_or_else(|e| failed("digamma_anchor", e)),
        sandwich_suite(seed(4)).unwrap_or_else(|e| failed("logdet_sandwich", e)),
        bounds_suite(cfg, seed(5)).unwrap_or_else(|e| failed("bound_ordering", e)),
        slope_suite(cfg, seed(6)).unwrap_or_else(|e| failed("high_snr_slope", e)),
    ];
    Ok(ValidationReport { suites })
}
