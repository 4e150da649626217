// High-SNR slope and power offset. With more receive than transmit
// antennas the offset is exact; otherwise it is sampled and bracketed.

use ris_capacity::asymptotics::{high_snr_expansion, HighSnrOptions};
use ris_capacity::capacity_bounds::{mc_ecc, CapacityQuery};
use ris_capacity::channel_model::{effective_stats, sample_path_set, PhaseShifts, SystemConfig};
use ris_capacity::rng::stream_rng;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let options = HighSnrOptions { mc_trials: 20_000, ..HighSnrOptions::default() };
    for (nt, nr) in [(2, 4), (4, 2)] {
        let config = SystemConfig { n_tx: nt, n_rx: nr, ..SystemConfig::default() };
        let paths = sample_path_set(&config, &mut stream_rng(7, 0));
        let stats = effective_stats(&config, &paths, &PhaseShifts::zeros(config.n_ris()))?;
        let e = high_snr_expansion(&stats, &options)?;
        print!("{nt}x{nr}: slope {} offset {:.4}", e.slope, e.offset);
        if let Some((lo, hi)) = e.offset_bounds {
            print!(" in [{lo:.4}, {hi:.4}]");
        }
        println!();
        for db in [20.0, 30.0, 40.0] {
            let rho = 10f64.powf(db / 10.0);
            let mc = mc_ecc(&CapacityQuery::new(rho, &stats).with_trials(20_000))?;
            println!("  {db} dB: mc {:.4}  affine {:.4}", mc.value, e.capacity(rho));
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
