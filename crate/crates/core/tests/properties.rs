mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use ris_capacity::capacity_bounds::{lower_bound, upper_bound, CapacityQuery};
use ris_capacity::channel_model::{effective_stats, sample_path_set, wrap_phase, PhaseShifts, SystemConfig};
use ris_capacity::linalg::{hermitian_eigenvalues, CMatrix};
use ris_capacity::matrix_analysis::{
    digamma, h_vector, ln_gamma, logdet_sandwich, principal_minor_sum, wishart_j, EigenList, MomentParams,
};
use ris_capacity::rng::stream_rng;

use common::{det, j_exact, ln_det_pd, poisson_harmonic, to_square, zero_square, Sampler};

fn random_cmatrix(s: &mut Sampler, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| s.cn())
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minors_expand_det_i_plus_lambda_a(seed in any::<u64>(), n in 1usize..=6, log_lambda in -3.0f64..3.0) {
        let lambda = 10f64.powf(log_lambda);
        let a = random_cmatrix(&mut Sampler::new(seed), n, n);
        let mut m = zero_square();
        for i in 0..n {
            for j in 0..n {
                m[i][j] = a[(i, j)] * lambda + if i == j { 1.0 } else { 0.0 };
            }
        }
        let direct = det(m, n);
        let sum: Complex64 = (0..=n).map(|t| principal_minor_sum(&a, t).unwrap() * lambda.powi(t as i32)).sum();
        prop_assert!((sum - direct).norm() <= 1e-9 * direct.norm().max(1.0), "{sum} vs {direct}");
    }

    #[test]
    fn j_matches_exact_rational_ratio(
        raw in prop::collection::vec(0.05f64..20.0, 1..=4),
        extra in 0usize..3,
    ) {
        let mut theta = raw;
        theta.sort_by(|a, b| b.total_cmp(a));
        let well_separated = theta.windows(2).all(|w| w[0] - w[1] >= 1e-2 * w[0]);
        prop_assume!(well_separated);
        let q = theta.len() + extra;
        let lib = wishart_j(&EigenList::from_values(theta.clone()).unwrap(), &MomentParams::new(1, q)).unwrap();
        let oracle = j_exact(&theta, q);
        prop_assert!(rel_close(lib, oracle, 1e-9), "{lib} vs {oracle} for {theta:?}, q = {q}");
    }

    #[test]
    fn j_handles_clustered_eigenvalues(base in 0.05f64..20.0, l in 2usize..=4, extra in 0usize..3, exact in any::<bool>()) {
        // Exact repeats have no oracle of their own; J is continuous, so
        // compare them against the nearby distinct cluster.
        let near: Vec<f64> = (0..l).map(|k| base * (1.0 + 1e-11 * k as f64)).collect();
        let theta = if exact { vec![base; l] } else { near.clone() };
        let q = l + extra;
        let lib = wishart_j(&EigenList::from_values(theta.clone()).unwrap(), &MomentParams::new(1, q)).unwrap();
        let oracle = j_exact(&near, q);
        prop_assert!(rel_close(lib, oracle, 1e-4), "{lib} vs {oracle} for {theta:?}, q = {q}");
    }

    #[test]
    fn h_vector_matches_poisson_average(x in 0.01f64..60.0, l in 1usize..=3, extra in 0usize..3) {
        let q = l + extra;
        let h = h_vector(x, l, &MomentParams::new(1, q)).unwrap();
        for (i, hi) in h.iter().enumerate() {
            let oracle = x.powi(i as i32) * poisson_harmonic(x, (q - l + 1 + i) as f64);
            prop_assert!(rel_close(*hi, oracle, 1e-9), "h_{} = {hi} vs {oracle} at x = {x}", i + 1);
        }
    }

    #[test]
    fn digamma_and_ln_gamma_recurrences(x in 0.05f64..200.0) {
        prop_assert!((digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x).abs() <= 1e-12 * (1.0 + 1.0 / x));
        prop_assert!((ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap() - x.ln()).abs() <= 1e-11 * (1.0 + ln_gamma(x + 1.0).unwrap().abs()));
    }

    #[test]
    fn logdet_sandwich_holds(seed in any::<u64>(), q in 1usize..=5, p_raw in 1usize..=5) {
        let p = p_raw.min(q);
        let mut s = Sampler::new(seed);
        let x = random_cmatrix(&mut s, p, q);
        let a = random_cmatrix(&mut s, q, q);
        let z = &a * a.adjoint() + CMatrix::identity(q, q) * Complex64::from(0.05);
        let (lo, hi) = logdet_sandwich(p, &hermitian_eigenvalues(&z)).unwrap();
        let base = ln_det_pd(&to_square(&(&x * x.adjoint())), p);
        let mid = ln_det_pd(&to_square(&(&x * &z * x.adjoint())), p);
        let tol = 1e-9 * (1.0 + mid.abs());
        prop_assert!(base + lo - tol <= mid && mid <= base + hi + tol);
    }

    #[test]
    fn wrap_phase_lands_in_half_open_interval(x in -1e4f64..1e4) {
        let w = wrap_phase(x);
        prop_assert!(w > -PI && w <= PI);
        let turns = (x - w) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn h_vector_skip_ahead_is_seamless(x in 400.0f64..3000.0, l in 1usize..=3) {
        let q = l + 1;
        let h = h_vector(x, l, &MomentParams::new(1, q)).unwrap();
        for (i, hi) in h.iter().enumerate() {
            let oracle = x.powi(i as i32) * poisson_harmonic(x, (q - l + 1 + i) as f64);
            prop_assert!(rel_close(*hi, oracle, 1e-9), "h_{} = {hi} vs {oracle} at x = {x}", i + 1);
        }
    }

    #[test]
    fn bounds_grow_with_snr(seed in any::<u64>(), nt in 1usize..=3, nr in 1usize..=3) {
        let config = SystemConfig { n_tx: nt, n_rx: nr, ..SystemConfig::default() };
        let mut rng = stream_rng(seed, 0);
        let paths = sample_path_set(&config, &mut rng);
        let stats = effective_stats(&config, &paths, &PhaseShifts::zeros(config.n_ris())).unwrap();
        let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for db in [-10.0, 0.0, 10.0, 20.0, 30.0] {
            let q = CapacityQuery::new(10f64.powf(db / 10.0), &stats);
            let now = (lower_bound(&q).unwrap().value, upper_bound(&q).unwrap().value);
            prop_assert!(now.0 >= prev.0 && now.1 >= prev.1);
            prop_assert!(now.0 <= now.1 + 1e-9);
            prev = now;
        }
    }
}
