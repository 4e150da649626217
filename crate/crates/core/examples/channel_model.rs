// Builds one RIS-aided link, prints its LoS geometry and checks the exact
// channel mean against an average of sampled realizations.

use ris_capacity::channel_model::{build_los_matrices, sample_path_set, ula_response, SystemConfig};
use ris_capacity::linalg::{frobenius, CMatrix};
use ris_capacity::phase_optimizer::{baseline_phases, BaselineKind};
use ris_capacity::rng::stream_rng;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let config = SystemConfig::default();
    println!("{} x {} MIMO, {} RIS elements", config.n_tx, config.n_rx, config.n_ris());

    let a = ula_response(4, 0.5, 0.3)?;
    println!("ULA response at 0.3 rad: |a|^2 = {:.3}", a.norm_squared());

    let mut rng = stream_rng(1, 0);
    let paths = sample_path_set(&config, &mut rng);
    for p in &paths.tx_ris {
        println!("tx->ris path: gain {:.3}, departure {:.3} rad", p.gain, p.departure);
    }
    let phases = baseline_phases(BaselineKind::Random, config.n_ris(), &mut rng);

    let los = build_los_matrices(&config, &paths)?;
    let stats = los.effective_stats(&config, &phases)?;
    println!("psi eigenvalues: {:.3?}", ris_capacity::linalg::hermitian_eigenvalues(&stats.psi));

    let n = 5000;
    let mut mean = CMatrix::zeros(config.n_rx, config.n_tx);
    for _ in 0..n {
        mean += los.sample_realization(&config, &phases, &mut rng)?.g;
    }
    mean /= num_complex::Complex64::from(n as f64);
    println!(
        "||sample mean - G_bar|| / ||G_bar|| = {:.4} over {n} draws",
        frobenius(&(&mean - &stats.g_bar)) / frobenius(&stats.g_bar)
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
