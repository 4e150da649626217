//! RIS phase design from statistical channel knowledge: a real-coded
//! genetic algorithm maximising the capacity upper bound.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::capacity_bounds::{upper_bound, CapacityQuery};
use crate::channel_model::{build_los_matrices, wrap_phase, EffectiveStats, LosMatrices, PathSet, PhaseShifts, SystemConfig};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rng::{stream_rng, uniform_angle, StreamRng};

#[derive(Debug, Clone, PartialEq)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    /// Standard deviation of a mutation step, in radians.
    pub mutation_sigma: f64,
    pub elitism: usize,
    pub seed: u64,
}

impl GaParams {
    /// Defaults for an RIS with `m` elements.
    pub fn default_for(m: usize) -> Self {
        GaParams {
            population: 50,
            generations: 200,
            tournament_size: 3,
            crossover_rate: 0.9,
            mutation_rate: 1.0 / m.max(1) as f64,
            mutation_sigma: 0.1 * PI,
            elitism: 2,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.population == 0 || self.generations == 0 {
            return bad("population and generations must be positive".into());
        }
        if self.elitism >= self.population {
            return bad(format!("elitism {} must be below population {}", self.elitism, self.population));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population {
            return bad(format!("tournament size {} must lie in 1..={}", self.tournament_size, self.population));
        }
        for (name, p) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if !(self.mutation_sigma > 0.0 && self.mutation_sigma.is_finite()) {
            return bad(format!("mutation_sigma must be positive, got {}", self.mutation_sigma));
        }
        Ok(())
    }
}

/// Upper-bound objective with the phase-independent parts precomputed.
/// Only the channel mean depends on the phases.
#[derive(Debug, Clone)]
pub struct PhaseObjective {
    config: SystemConfig,
    los: LosMatrices,
    psi: CMatrix,
    rho: f64,
}

impl PhaseObjective {
    pub fn new(config: &SystemConfig, paths: &PathSet, rho: f64) -> Result<Self> {
        let los = build_los_matrices(config, paths)?;
        let psi = los.covariance(config)?;
        Ok(PhaseObjective { config: config.clone(), los, psi, rho })
    }

    pub fn stats(&self, phases: &PhaseShifts) -> Result<EffectiveStats> {
        Ok(EffectiveStats {
            g_bar: self.los.mean_channel(&self.config, phases)?,
            psi: self.psi.clone(),
            upsilon: None,
        })
    }

    pub fn evaluate(&self, phases: &PhaseShifts) -> Result<f64> {
        let stats = self.stats(phases)?;
        Ok(upper_bound(&CapacityQuery::new(self.rho, &stats))?.value)
    }

    pub fn n_ris(&self) -> usize {
        self.config.n_ris()
    }
}

/// Capacity upper bound for the given phases.
pub fn objective(phases: &PhaseShifts, config: &SystemConfig, paths: &PathSet, rho: f64) -> Result<f64> {
    PhaseObjective::new(config, paths, rho)?.evaluate(phases)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace {
    pub best_phases: PhaseShifts,
    pub best_objective: f64,
    /// `(best so far, population mean)` after each generation; entry 0 is
    /// the initial population.
    pub history: Vec<(f64, f64)>,
}

impl OptimizationTrace {
    /// `generation,best,mean` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generation,best,mean\n");
        for (g, (best, mean)) in self.history.iter().enumerate() {
            out.push_str(&format!(
                "{g},{},{}\n",
                crate::experiment::csv::sig(*best),
                crate::experiment::csv::sig(*mean)
            ));
        }
        out
    }
}

fn random_genome(rng: &mut StreamRng, m: usize) -> Vec<f64> {
    (0..m).map(|_| wrap_phase(uniform_angle(rng))).collect()
}

fn evaluate_all(objective: &PhaseObjective, population: &[Vec<f64>]) -> Vec<f64> {
    population
        .par_iter()
        .map(|genome| match objective.evaluate(&PhaseShifts::wrapped(genome.iter().copied())) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                log::warn!("objective returned {v}; individual discarded");
                f64::NEG_INFINITY
            }
            Err(e) => {
                log::warn!("objective failed: {e}; individual discarded");
                f64::NEG_INFINITY
            }
        })
        .collect()
}

fn tournament(rng: &mut StreamRng, fitness: &[f64], size: usize) -> usize {
    let mut best = rng.random_range(0..fitness.len());
    for _ in 1..size {
        let challenger = rng.random_range(0..fitness.len());
        if fitness[challenger] > fitness[best] {
            best = challenger;
        }
    }
    best
}

fn population_mean(fitness: &[f64]) -> f64 {
    let finite: Vec<f64> = fitness.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        f64::NEG_INFINITY
    } else {
        finite.iter().sum::<f64>() / finite.len() as f64
    }
}

/// Maximises [`PhaseObjective`] over `(-pi, pi]^M`.
///
/// All random decisions are drawn on the calling thread. Fitness values are
/// evaluated in parallel, so the trace depends only on `ga.seed`.
pub fn ga_optimize(config: &SystemConfig, paths: &PathSet, rho: f64, ga: &GaParams) -> Result<OptimizationTrace> {
    ga.validate()?;
    let objective = PhaseObjective::new(config, paths, rho)?;
    run_ga(&objective, ga)
}

/// [`ga_optimize`] on a prepared objective.
pub fn run_ga(objective: &PhaseObjective, ga: &GaParams) -> Result<OptimizationTrace> {
    ga.validate()?;
    let m = objective.n_ris();
    if m == 0 {
        return Err(Error::InvalidDimension("RIS has no elements".into()));
    }
    let mut rng = stream_rng(ga.seed, 0);
    let step = Normal::new(0.0, ga.mutation_sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut population: Vec<Vec<f64>> = (0..ga.population).map(|_| random_genome(&mut rng, m)).collect();
    let mut fitness = evaluate_all(objective, &population);

    let argmax = |f: &[f64]| (0..f.len()).fold(0, |b, i| if f[i] > f[b] { i } else { b });
    let mut best_idx = argmax(&fitness);
    let mut best = (population[best_idx].clone(), fitness[best_idx]);
    let mut history = vec![(best.1, population_mean(&fitness))];

    for _ in 0..ga.generations {
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]));

        let mut next: Vec<Vec<f64>> = order[..ga.elitism].iter().map(|&i| population[i].clone()).collect();
        let mut next_fitness: Vec<f64> = order[..ga.elitism].iter().map(|&i| fitness[i]).collect();
        let mut children = Vec::with_capacity(ga.population - ga.elitism);
        while next.len() + children.len() < ga.population {
            let a = tournament(&mut rng, &fitness, ga.tournament_size);
            let b = tournament(&mut rng, &fitness, ga.tournament_size);
            let mut child = if rng.random::<f64>() < ga.crossover_rate {
                population[a]
                    .iter()
                    .zip(&population[b])
                    .map(|(&x, &y)| if rng.random::<bool>() { x } else { y })
                    .collect()
            } else {
                population[a].clone()
            };
            for gene in child.iter_mut() {
                if rng.random::<f64>() < ga.mutation_rate {
                    *gene = wrap_phase(*gene + step.sample(&mut rng));
                }
            }
            children.push(child);
        }
        next_fitness.extend(evaluate_all(objective, &children));
        next.extend(children);
        population = next;
        fitness = next_fitness;

        best_idx = argmax(&fitness);
        if fitness[best_idx] > best.1 {
            best = (population[best_idx].clone(), fitness[best_idx]);
        }
        history.push((best.1, population_mean(&fitness)));
    }

    if !best.1.is_finite() {
        return Err(Error::InvalidParameter("no individual had a finite objective".into()));
    }
    Ok(OptimizationTrace {
        best_phases: PhaseShifts::wrapped(best.0),
        best_objective: best.1,
        history,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Random,
    Zero,
}

/// Reference phase designs: i.i.d. uniform phases, or `Phi = I`.
pub fn baseline_phases<R: Rng + ?Sized>(kind: BaselineKind, m: usize, rng: &mut R) -> PhaseShifts {
    match kind {
        BaselineKind::Zero => PhaseShifts::zeros(m),
        BaselineKind::Random => PhaseShifts::wrapped((0..m).map(|_| uniform_angle(rng))),
    }
}
