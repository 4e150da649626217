// Large-RIS behaviour: convergence to the limiting capacity at fixed
// total energy, power-scaling laws, and the large-M offset.

use ris_capacity::asymptotics::{corollary1_expansion, large_m_capacity, power_scaling, random_phase_ecc};
use ris_capacity::channel_model::{sample_path_set, upsilon, SystemConfig};
use ris_capacity::rng::stream_rng;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let base = SystemConfig::default();
    let paths = sample_path_set(&base, &mut stream_rng(11, 0));
    let ups = upsilon(&base, &paths)?;

    let energy = 10.0;
    let limit = large_m_capacity(&ups, base.n_rx, energy, 1, 20_000, 1)?.value;
    println!("limiting capacity at E = 10 dB: {limit:.4}");
    for m in [16, 64, 256] {
        let config = base.with_ris_columns(m / base.m_h);
        let ecc = random_phase_ecc(&config, &paths, energy / m as f64, 5_000, 1)?;
        println!("  M = {m:>3}: capacity {:.4}", ecc.value);
    }

    for alpha in [0.5, 1.0, 2.0] {
        let v = power_scaling(&ups, base.n_rx, 0.1, alpha, &[16, 64, 256, 1024], 5_000, 1)?;
        println!("rho = rho0 / M^{alpha}: {:?}, trace {:.3?}", v.limit_kind, v.trace);
    }

    let wide = SystemConfig { n_paths_t: 3, ..base };
    let ups = upsilon(&wide, &sample_path_set(&wide, &mut stream_rng(12, 0)))?;
    for m in [64, 128, 256] {
        let e = corollary1_expansion(&ups, wide.n_tx, wide.n_rx, m)?;
        println!("M = {m}: large-M offset {:.4} (3 dB units)", e.offset);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
