//! Reference computations for the integration tests.
//!
//! Nothing here calls the library's linear algebra or special functions:
//! determinants use plain Gaussian elimination on stack arrays or exact
//! rationals, covariance roots are Cholesky factors, and sampling goes
//! straight to ChaCha.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const MAX_N: usize = 8;

pub type Square = [[Complex64; MAX_N]; MAX_N];

pub fn zero_square() -> Square {
    [[Complex64::new(0.0, 0.0); MAX_N]; MAX_N]
}

/// Determinant of the leading `n x n` block by partial-pivot elimination.
pub fn det(mut a: Square, n: usize) -> Complex64 {
    let mut d = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        if a[pivot][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != k {
            a.swap(pivot, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let sub = f * a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    d
}

/// Real determinant by partial-pivot elimination.
pub fn det_real(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[pivot][k] == 0.0 {
            return 0.0;
        }
        if pivot != k {
            a.swap(pivot, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    d
}

/// Lower Cholesky factor of a Hermitian positive definite block.
pub fn cholesky(a: &Square, n: usize) -> Square {
    let mut l = zero_square();
    for j in 0..n {
        let mut s = a[j][j].re;
        for k in 0..j {
            s -= l[j][k].norm_sqr();
        }
        assert!(s > 0.0, "matrix is not positive definite");
        let d = s.sqrt();
        l[j][j] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / d;
        }
    }
    l
}

pub struct Sampler {
    rng: ChaCha12Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha12Rng::seed_from_u64(seed) }
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// CN(0, 1).
    pub fn cn(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn uniform(&mut self) -> f64 {
        rand::Rng::random::<f64>(&mut self.rng)
    }
}

/// Running mean and standard error.
#[derive(Default, Clone, Copy)]
pub struct Welford {
    pub n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_error(&self) -> f64 {
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Sampled `E det(B B^H)` and `E ln det(B B^H)` for `B = b_bar + L W`,
/// `L` the Cholesky factor of `omega`, `W` i.i.d. CN(0, 1), `B` is `p x q`.
pub fn sample_det_moments(
    b_bar: &[Vec<Complex64>],
    omega: &Square,
    p: usize,
    q: usize,
    trials: usize,
    seed: u64,
) -> (Welford, Welford) {
    let l = cholesky(omega, p);
    let mut s = Sampler::new(seed);
    let mut det_acc = Welford::default();
    let mut log_acc = Welford::default();
    let mut w = zero_square();
    let mut b = zero_square();
    for _ in 0..trials {
        for row in w.iter_mut().take(p) {
            for x in row.iter_mut().take(q) {
                *x = s.cn();
            }
        }
        for i in 0..p {
            for j in 0..q {
                let mut acc = b_bar[i][j];
                for k in 0..=i {
                    acc += l[i][k] * w[k][j];
                }
                b[i][j] = acc;
            }
        }
        let mut gram = zero_square();
        for i in 0..p {
            for j in 0..=i {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..q {
                    acc += b[i][k] * b[j][k].conj();
                }
                gram[i][j] = acc;
                gram[j][i] = acc.conj();
            }
        }
        let d = det(gram, p).re;
        det_acc.push(d);
        log_acc.push(d.ln());
    }
    (det_acc, log_acc)
}

/// `det(Delta) / V` in exact rational arithmetic, with
/// `Delta[i][j] = (q - L + j + theta_i) theta_i^(j-1)` (1-based `j`) and
/// `V = prod_{i<j} (theta_j - theta_i)`. The values must be distinct.
pub fn j_exact(theta: &[f64], q: usize) -> f64 {
    let l = theta.len();
    let t: Vec<BigRational> = theta.iter().map(|&x| BigRational::from_float(x).unwrap()).collect();
    let base = BigRational::from_integer(BigInt::from(q - l));
    let mut m: Vec<Vec<BigRational>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let c = &base + BigRational::from_integer(BigInt::from(j + 1)) + &t[i];
                    c * t[i].pow(j as i32)
                })
                .collect()
        })
        .collect();
    let mut det = BigRational::one();
    for k in 0..l {
        let pivot = (k..l).find(|&i| !m[i][k].is_zero()).expect("singular");
        if pivot != k {
            m.swap(pivot, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..l {
            let f = &m[i][k] / &m[k][k];
            for j in k..l {
                let sub = &f * &m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    let mut v = BigRational::one();
    for i in 0..l {
        for j in i + 1..l {
            v *= &t[j] - &t[i];
        }
    }
    (det / v).to_f64().unwrap()
}

/// `E[H(a, N)]` with `N ~ Poisson(x)` and `H(a, n) = sum_{k<n} 1/(a + k)`,
/// which equals `E psi(a + N) - psi(a)`.
pub fn poisson_harmonic(x: f64, a: f64) -> f64 {
    let mut ln_pmf = -x;
    let mut harmonic = 0.0;
    let mut total = 0.0;
    let mut n = 0usize;
    loop {
        let pmf = ln_pmf.exp();
        total += pmf * harmonic;
        harmonic += 1.0 / (a + n as f64);
        n += 1;
        ln_pmf += x.ln() - (n as f64).ln();
        if n as f64 > x + 40.0 * (x.sqrt() + 1.0) {
            return total;
        }
    }
}

/// Exponential integral `E1(x)` for `0 < x <= 1` by its power series.
pub fn exp_integral_e1(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..60 {
        term *= -x / k as f64;
        sum += term / k as f64;
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Copies a library matrix into a stack block.
pub fn to_square(m: &nalgebra::DMatrix<Complex64>) -> Square {
    let mut s = zero_square();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            s[i][j] = m[(i, j)];
        }
    }
    s
}

/// `ln det` of a Hermitian positive definite block via its Cholesky factor.
pub fn ln_det_pd(a: &Square, n: usize) -> f64 {
    let l = cholesky(a, n);
    (0..n).map(|i| 2.0 * l[i][i].re.ln()).sum()
}
