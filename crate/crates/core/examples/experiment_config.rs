// Runs a small SNR sweep from a flat `key = value` config, the same path
// the command-line tool takes.

use ris_capacity::experiment::{cmd_sweep_snr, ExperimentConfig};

const CONFIG: &str = "
# 2x2 link, 8-element RIS
n_tx = 2
n_rx = 2
m_h = 4
m_v = 2
snr_grid_db = 0, 10, 20
mc_trials = 4000
seed = 17
";

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::parse(CONFIG)?;
    print!("{}", cmd_sweep_snr(&cfg)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
