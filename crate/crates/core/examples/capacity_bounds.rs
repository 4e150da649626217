// Ergodic capacity of the default link over SNR: Monte Carlo estimate
// against the closed-form upper and lower bounds.

use ris_capacity::capacity_bounds::{bound_pair, mc_ecc, CapacityQuery};
use ris_capacity::channel_model::{effective_stats, sample_path_set, PhaseShifts, SystemConfig};
use ris_capacity::rng::stream_rng;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let config = SystemConfig::default();
    let paths = sample_path_set(&config, &mut stream_rng(2021, 1));
    let stats = effective_stats(&config, &paths, &PhaseShifts::zeros(config.n_ris()))?;

    println!("{:>6} {:>9} {:>9} {:>9}", "dB", "lower", "mc", "upper");
    for db in (-10..=30).step_by(10) {
        let q = CapacityQuery::new(10f64.powf(db as f64 / 10.0), &stats).with_trials(5000).with_seed(3);
        let mc = mc_ecc(&q)?;
        let (lo, hi) = bound_pair(&q)?;
        println!("{db:>6} {:>9.4} {:>9.4} {:>9.4}", lo.value, mc.value, hi.value);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
