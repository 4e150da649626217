// Closed-form determinant and log-determinant moments of a non-central
// complex Wishart matrix, side by side with a quick sampling estimate.

use ris_capacity::linalg::{hermitian_part, ln_det_hpd, CMatrix};
use ris_capacity::matrix_analysis::{expected_det, expected_logdet, generalized_nonzero_eigs, MomentParams};
use ris_capacity::monte_carlo::mc_mean;
use ris_capacity::rng::{complex_normal_matrix, stream_rng};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let (p, q) = (2, 3);
    let mut rng = stream_rng(4, 0);
    let b_bar = complex_normal_matrix(&mut rng, p, q);
    let x = complex_normal_matrix(&mut rng, p, p);
    let omega = hermitian_part(&(&x * x.adjoint() + CMatrix::identity(p, p)));
    let chol = omega.clone().cholesky().ok_or("omega is not positive definite")?.l();
    let params = MomentParams::new(p, q);

    let eigs = generalized_nonzero_eigs(&(&b_bar * b_bar.adjoint()), &omega, &params)?;
    println!("whitened eigenvalues: {:.4?}", eigs.values);

    let det = expected_det(&b_bar, &omega, &params)?;
    let logdet = expected_logdet(&eigs, &params)? + ln_det_hpd(&omega)?;

    let trials = 200_000;
    let sampled = |log: bool| {
        mc_mean(trials, 9, |rng| {
            let b = &b_bar + &chol * complex_normal_matrix(rng, p, q);
            let d = (&b * b.adjoint()).determinant().re;
            Ok(if log { d.ln() } else { d })
        })
    };
    let (d, l) = (sampled(false)?, sampled(true)?);
    println!("E det     closed {det:.5}  sampled {:.5} +- {:.5}", d.mean, d.std_error);
    println!("E ln det  closed {logdet:.5}  sampled {:.5} +- {:.5}", l.mean, l.std_error);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
