// Genetic-algorithm phase design on the capacity upper bound, compared
// with random and all-zero phases.

use ris_capacity::channel_model::{sample_path_set, SystemConfig};
use ris_capacity::phase_optimizer::{baseline_phases, ga_optimize, objective, BaselineKind, GaParams};
use ris_capacity::rng::stream_rng;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let config = SystemConfig::default().with_ris_columns(2);
    let m = config.n_ris();
    let mut rng = stream_rng(5, 0);
    let paths = sample_path_set(&config, &mut rng);
    let rho = 10.0;

    let ga = GaParams { generations: 60, ..GaParams::default_for(m) };
    let trace = ga_optimize(&config, &paths, rho, &ga)?;
    let random = objective(&baseline_phases(BaselineKind::Random, m, &mut rng), &config, &paths, rho)?;
    let zero = objective(&baseline_phases(BaselineKind::Zero, m, &mut rng), &config, &paths, rho)?;

    println!("upper bound at 10 dB, M = {m}");
    println!("  GA     {:.4}", trace.best_objective);
    println!("  random {random:.4}");
    println!("  zero   {zero:.4}");
    for (g, (best, mean)) in trace.history.iter().enumerate().step_by(20) {
        println!("  generation {g:>3}: best {best:.4} mean {mean:.4}");
    }
    println!("phases: {:.3?}", trace.best_phases.as_slice());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
