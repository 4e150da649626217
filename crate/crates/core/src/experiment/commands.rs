use std::fmt::Write as _;

use crate::asymptotics::{
    high_snr_expansion, large_m_capacity, large_m_upper_bound, random_phase_ecc, HighSnrOptions,
};
use crate::capacity_bounds::{bound_pair, mc_ecc, CapacityQuery};
use crate::channel_model::{effective_stats, sample_path_set, upsilon, PathSet, PhaseShifts, SystemConfig};
use crate::error::Result;
use crate::phase_optimizer::{baseline_phases, ga_optimize, BaselineKind, OptimizationTrace};
use crate::rng::{derive_seed, stream_rng};

use super::config::{ExperimentConfig, PhaseMode};
use super::csv::{full, sig};

const LABEL_PATHS: u64 = 1;
const LABEL_PHASES: u64 = 2;
const LABEL_MC: u64 = 3;
const LABEL_GA: u64 = 4;
const LABEL_OFFSET: u64 = 5;

/// Which figure the RIS-size sweep reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResMode {
    /// Fixed SNR; optimized, random and zero phases.
    A,
    /// SNR `E / M` with random phases, against the large-RIS limit.
    B,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// The LoS geometry shared by every command for a given seed.
pub fn experiment_paths(cfg: &ExperimentConfig) -> PathSet {
    let mut rng = stream_rng(derive_seed(cfg.seed, LABEL_PATHS), 0);
    sample_path_set(&cfg.system, &mut rng)
}

fn mc_seed(cfg: &ExperimentConfig) -> u64 {
    derive_seed(cfg.seed, LABEL_MC)
}

fn optimize_for(cfg: &ExperimentConfig, system: &SystemConfig, paths: &PathSet) -> Result<OptimizationTrace> {
    let mut ga = cfg.ga_params(system.n_ris());
    ga.seed = derive_seed(cfg.seed, LABEL_GA);
    ga_optimize(system, paths, db_to_linear(cfg.ref_snr_db), &ga)
}

fn random_phases(cfg: &ExperimentConfig, m: usize) -> PhaseShifts {
    let mut rng = stream_rng(derive_seed(cfg.seed, LABEL_PHASES), m as u64);
    baseline_phases(BaselineKind::Random, m, &mut rng)
}

fn phases_for(cfg: &ExperimentConfig, system: &SystemConfig, paths: &PathSet) -> Result<PhaseShifts> {
    let m = system.n_ris();
    Ok(match cfg.phase_mode {
        PhaseMode::Zero => PhaseShifts::zeros(m),
        PhaseMode::Random => random_phases(cfg, m),
        PhaseMode::Optimized => optimize_for(cfg, system, paths)?.best_phases,
    })
}

/// `# ...` lines recording the run parameters and the sampled LoS paths.
fn header_comments(cfg: &ExperimentConfig, system: &SystemConfig, paths: &PathSet) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# seed={} n_tx={} n_rx={} m_h={} m_v={} mc_trials={} phase_mode={}",
        cfg.seed,
        system.n_tx,
        system.n_rx,
        system.m_h,
        system.m_v,
        cfg.mc_trials,
        cfg.phase_mode.label()
    );
    for p in &paths.tx_ris {
        let _ = writeln!(
            out,
            "# tx_ris gain={},{} azimuth={} elevation={} departure={}",
            full(p.gain.re),
            full(p.gain.im),
            full(p.azimuth),
            full(p.elevation),
            full(p.departure)
        );
    }
    for p in &paths.ris_rx {
        let _ = writeln!(
            out,
            "# ris_rx gain={},{} arrival={} azimuth={} elevation={}",
            full(p.gain.re),
            full(p.gain.im),
            full(p.arrival),
            full(p.azimuth),
            full(p.elevation)
        );
    }
    for p in &paths.direct {
        let _ = writeln!(
            out,
            "# direct gain={},{} arrival={} departure={}",
            full(p.gain.re),
            full(p.gain.im),
            full(p.arrival),
            full(p.departure)
        );
    }
    out
}

/// Capacity versus SNR: `rho_db,mc,upper,lower,asymptote`.
///
/// The asymptote uses the exact offset when `N_r >= N_t` and the upper
/// offset bound otherwise.
pub fn cmd_sweep_snr(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let system = &cfg.system;
    let paths = experiment_paths(cfg);
    let phases = phases_for(cfg, system, &paths)?;
    let stats = effective_stats(system, &paths, &phases)?;
    let options = HighSnrOptions {
        mc_trials: cfg.mc_trials,
        seed: derive_seed(cfg.seed, LABEL_OFFSET),
        ..HighSnrOptions::default()
    };
    let expansion = high_snr_expansion(&stats, &options)?;
    let offset = expansion.offset_bounds.map_or(expansion.offset, |(_, upper)| upper);

    let mut out = header_comments(cfg, system, &paths);
    out.push_str("rho_db,mc,upper,lower,asymptote\n");
    for &db in &cfg.snr_grid_db {
        let rho = db_to_linear(db);
        let query = CapacityQuery::new(rho, &stats).with_trials(cfg.mc_trials).with_seed(mc_seed(cfg));
        let mc = mc_ecc(&query)?;
        let (lower, upper) = bound_pair(&query)?;
        let asymptote = expansion.slope * (rho.log2() - offset);
        let _ = writeln!(out, "{},{},{},{},{}", sig(db), sig(mc.value), sig(upper.value), sig(lower.value), sig(asymptote));
    }
    Ok(out)
}

/// Capacity versus RIS size.
///
/// Mode A: `M,ecc_optimized,ecc_random,ecc_zero` at the reference SNR.
/// Mode B: `M,ecc,c_tilde,c_tilde_upper` at SNR `E / M`, where `ecc`
/// averages over random phases.
pub fn cmd_sweep_res(cfg: &ExperimentConfig, mode: ResMode) -> Result<String> {
    cfg.validate()?;
    let columns = cfg.m_grid.iter().map(|&m| cfg.columns_for(m)).collect::<Result<Vec<_>>>()?;
    let paths = experiment_paths(cfg);
    let mut out = header_comments(cfg, &cfg.system, &paths);
    match mode {
        ResMode::A => {
            out.push_str("M,ecc_optimized,ecc_random,ecc_zero\n");
            let rho = db_to_linear(cfg.ref_snr_db);
            for (&m, &m_v) in cfg.m_grid.iter().zip(&columns) {
                let system = cfg.system.with_ris_columns(m_v);
                let ecc = |phases: &PhaseShifts| -> Result<f64> {
                    let stats = effective_stats(&system, &paths, phases)?;
                    let q = CapacityQuery::new(rho, &stats).with_trials(cfg.mc_trials).with_seed(mc_seed(cfg));
                    Ok(mc_ecc(&q)?.value)
                };
                let optimized = optimize_for(cfg, &system, &paths)?.best_phases;
                let _ = writeln!(
                    out,
                    "{m},{},{},{}",
                    sig(ecc(&optimized)?),
                    sig(ecc(&random_phases(cfg, m))?),
                    sig(ecc(&PhaseShifts::zeros(m))?)
                );
            }
        }
        ResMode::B => {
            out.push_str("M,ecc,c_tilde,c_tilde_upper\n");
            let energy = db_to_linear(cfg.energy_db);
            let ups = upsilon(&cfg.system, &paths)?;
            let n_rx = cfg.system.n_rx;
            // With rho = E / M the limit no longer depends on M.
            let c_tilde = large_m_capacity(&ups, n_rx, energy, 1, cfg.mc_trials, mc_seed(cfg))?.value;
            let c_upper = large_m_upper_bound(&ups, n_rx, energy, 1)?.value;
            for (&m, &m_v) in cfg.m_grid.iter().zip(&columns) {
                let system = cfg.system.with_ris_columns(m_v);
                let ecc = random_phase_ecc(&system, &paths, energy / m as f64, cfg.mc_trials, mc_seed(cfg))?;
                let _ = writeln!(out, "{m},{},{},{}", sig(ecc.value), sig(c_tilde), sig(c_upper));
            }
        }
    }
    Ok(out)
}

/// GA run on the upper bound: `(trace CSV, phase vector)`, the phases one
/// per line in radians with 17 significant digits.
pub fn cmd_optimize(cfg: &ExperimentConfig) -> Result<(String, String)> {
    cfg.validate()?;
    let paths = experiment_paths(cfg);
    let trace = optimize_for(cfg, &cfg.system, &paths)?;
    let mut csv = header_comments(cfg, &cfg.system, &paths);
    csv.push_str(&trace.to_csv());
    let phases: String = trace.best_phases.as_slice().iter().map(|&t| full(t) + "\n").collect();
    Ok((csv, phases))
}
