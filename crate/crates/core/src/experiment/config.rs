//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # 2x4 link, 4x4 RIS
//! n_tx = 2
//! n_rx = 4
//! snr_grid_db = -10, 0, 10, 20
//! phase_mode = random
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::channel_model::SystemConfig;
use crate::error::{Error, Result};
use crate::phase_optimizer::GaParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    Random,
    Zero,
    Optimized,
}

impl FromStr for PhaseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(PhaseMode::Random),
            "zero" => Ok(PhaseMode::Zero),
            "optimized" => Ok(PhaseMode::Optimized),
            other => Err(Error::Config(format!("unknown phase_mode '{other}' (random, zero, optimized)"))),
        }
    }
}

impl PhaseMode {
    pub fn label(self) -> &'static str {
        match self {
            PhaseMode::Random => "random",
            PhaseMode::Zero => "zero",
            PhaseMode::Optimized => "optimized",
        }
    }
}

/// Optional GA settings; unset fields fall back to [`GaParams::default_for`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GaOverrides {
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub tournament_size: Option<usize>,
    pub crossover_rate: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub mutation_sigma: Option<f64>,
    pub elitism: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub snr_grid_db: Vec<f64>,
    /// RIS sizes for the size sweep; `m_h` stays fixed.
    pub m_grid: Vec<usize>,
    pub mc_trials: usize,
    pub seed: u64,
    pub phase_mode: PhaseMode,
    pub output_path: Option<PathBuf>,
    pub ga: GaOverrides,
    /// SNR at which phases are optimized and the fixed-SNR size sweep runs.
    pub ref_snr_db: f64,
    /// Total SNR `E` of the `rho = E / M` size sweep.
    pub energy_db: f64,
    /// Monte Carlo trials per check in `validate`.
    pub validate_trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            system: SystemConfig::default(),
            snr_grid_db: (0..=10).map(|k| -10.0 + 5.0 * k as f64).collect(),
            m_grid: vec![16, 32, 64, 128, 256],
            mc_trials: 10_000,
            seed: 2021,
            phase_mode: PhaseMode::Random,
            output_path: None,
            ga: GaOverrides::default(),
            ref_snr_db: 10.0,
            energy_db: 10.0,
            validate_trials: 1_000_000,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse value '{value}' for key '{key}'")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses config text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let s = &mut self.system;
        let g = &mut self.ga;
        match key {
            "n_tx" => s.n_tx = parse(key, v)?,
            "n_rx" => s.n_rx = parse(key, v)?,
            "m_h" => s.m_h = parse(key, v)?,
            "m_v" => s.m_v = parse(key, v)?,
            "d_t" => s.d_t = parse(key, v)?,
            "d_r" => s.d_r = parse(key, v)?,
            "d_h" => s.d_h = parse(key, v)?,
            "d_v" => s.d_v = parse(key, v)?,
            "beta_t" => s.beta_t = parse(key, v)?,
            "beta_r" => s.beta_r = parse(key, v)?,
            "beta_d" => s.beta_d = parse(key, v)?,
            "los_power_r" => s.los_power_r = parse(key, v)?,
            "los_power_h" => s.los_power_h = parse(key, v)?,
            "n_paths_t" => s.n_paths_t = parse(key, v)?,
            "n_paths_r" => s.n_paths_r = parse(key, v)?,
            "n_paths_h" => s.n_paths_h = parse(key, v)?,
            "snr_grid_db" => self.snr_grid_db = parse_list(key, v)?,
            "m_grid" => self.m_grid = parse_list(key, v)?,
            "mc_trials" => self.mc_trials = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "phase_mode" => self.phase_mode = v.parse()?,
            "output_path" => self.output_path = Some(PathBuf::from(v)),
            "ref_snr_db" => self.ref_snr_db = parse(key, v)?,
            "energy_db" => self.energy_db = parse(key, v)?,
            "validate_trials" => self.validate_trials = parse(key, v)?,
            "ga_population" => g.population = Some(parse(key, v)?),
            "ga_generations" => g.generations = Some(parse(key, v)?),
            "ga_tournament_size" => g.tournament_size = Some(parse(key, v)?),
            "ga_crossover_rate" => g.crossover_rate = Some(parse(key, v)?),
            "ga_mutation_rate" => g.mutation_rate = Some(parse(key, v)?),
            "ga_mutation_sigma" => g.mutation_sigma = Some(parse(key, v)?),
            "ga_elitism" => g.elitism = Some(parse(key, v)?),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate().map_err(|e| Error::Config(e.to_string()))?;
        let ascending_f = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if self.snr_grid_db.is_empty() || !ascending_f(&self.snr_grid_db) {
            return Err(Error::Config("snr_grid_db must be nonempty and strictly ascending".into()));
        }
        if self.snr_grid_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("snr_grid_db entries must be finite".into()));
        }
        if self.m_grid.is_empty() || self.m_grid.windows(2).any(|w| w[0] >= w[1]) || self.m_grid[0] == 0 {
            return Err(Error::Config("m_grid must be nonempty, positive and strictly ascending".into()));
        }
        if self.mc_trials == 0 || self.validate_trials == 0 {
            return Err(Error::Config("trial counts must be positive".into()));
        }
        if !self.ref_snr_db.is_finite() || !self.energy_db.is_finite() {
            return Err(Error::Config("reference SNRs must be finite".into()));
        }
        self.ga_params(self.system.n_ris()).validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// RIS column count for a total size `m`, which must be a multiple of `m_h`.
    pub fn columns_for(&self, m: usize) -> Result<usize> {
        if !m.is_multiple_of(self.system.m_h) {
            return Err(Error::Config(format!("RIS size {m} is not a multiple of m_h = {}", self.system.m_h)));
        }
        Ok(m / self.system.m_h)
    }

    /// GA settings for an RIS with `m` elements. The seed is left at 0.
    pub fn ga_params(&self, m: usize) -> GaParams {
        let d = GaParams::default_for(m);
        let g = &self.ga;
        GaParams {
            population: g.population.unwrap_or(d.population),
            generations: g.generations.unwrap_or(d.generations),
            tournament_size: g.tournament_size.unwrap_or(d.tournament_size),
            crossover_rate: g.crossover_rate.unwrap_or(d.crossover_rate),
            mutation_rate: g.mutation_rate.unwrap_or(d.mutation_rate),
            mutation_sigma: g.mutation_sigma.unwrap_or(d.mutation_sigma),
            elitism: g.elitism.unwrap_or(d.elitism),
            seed: 0,
        }
    }
}
