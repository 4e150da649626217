use crate::error::{Error, Result};

/// `B_{2k} / (2k)` for k = 1..8.
const ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// Digamma function `psi(x) = d/dx ln Gamma(x)` for `x > 0`.
///
/// Shifts the argument to `x >= 6` with `psi(x) = psi(x + 1) - 1/x`, then
/// sums the asymptotic series `ln x - 1/(2x) - sum B_{2k} / (2k x^{2k})`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { function: "digamma", value: x });
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 6.0 {
        shift -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    let mut power = inv2;
    for c in ASYMPTOTIC {
        series += c * power;
        power *= inv2;
    }
    Ok(shift + y.ln() - 0.5 / y - series)
}

/// `B_{2k} / (2k (2k - 1))` for k = 1..7.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

/// `ln Gamma(x)` for `x > 0`: recurrence up to `x >= 10`, then Stirling.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { function: "ln_gamma", value: x });
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift -= y.ln();
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING {
        series += c * power;
        power *= inv2;
    }
    Ok(shift + (y - 0.5) * y.ln() - y + 0.5 * std::f64::consts::TAU.ln() + series)
}

/// `sum_{k=0}^{p-1} psi(q - k)`, the central-Wishart log-determinant mean.
pub fn digamma_sum(p: usize, q: usize) -> Result<f64> {
    if p > q {
        return Err(Error::Shape { p, q });
    }
    (0..p).map(|k| digamma((q - k) as f64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn psi_one_is_minus_euler_gamma() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-12);
    }

    #[test]
    fn recurrence_from_one() {
        let mut expected = -EULER_GAMMA;
        for n in 1..40 {
            let got = digamma(n as f64).unwrap();
            assert!((got - expected).abs() < 1e-12, "psi({n}) = {got}, expected {expected}");
            expected += 1.0 / n as f64;
        }
        assert!((digamma(2.0).unwrap() - digamma(1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_integer_values() {
        // psi(1/2) = -gamma - 2 ln 2
        let expected = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(0.5).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn small_and_large_arguments() {
        // psi(x) ~ -1/x - gamma for small x
        let x = 1e-8;
        assert!((digamma(x).unwrap() - (-1.0 / x - EULER_GAMMA)).abs() < 1e-6);
        let big = 1e6;
        assert!((digamma(big).unwrap() - (big.ln() - 0.5 / big)).abs() < 1e-12);
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut ln_fact = 0.0;
        for n in 1..60 {
            let got = ln_gamma(n as f64).unwrap();
            assert!((got - ln_fact).abs() < 1e-12 * ln_fact.max(1.0), "ln Gamma({n})");
            ln_fact += (n as f64).ln();
        }
        let half = ln_gamma(0.5).unwrap();
        assert!((half - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(digamma(0.0), Err(Error::Domain { .. })));
        assert!(digamma(-1.5).is_err());
        assert!(digamma(f64::NAN).is_err());
        assert!(digamma_sum(3, 2).is_err());
        assert!(ln_gamma(0.0).is_err());
    }
}
