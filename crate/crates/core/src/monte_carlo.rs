//! Chunked, seed-reproducible Monte Carlo averaging.
//!
//! Trials are split into fixed-size chunks. Chunk `c` always draws from
//! stream `c` of the seed and chunk statistics are merged in chunk order, so
//! the estimate is bit-identical for any worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng};

/// Trials per independent random stream.
pub const CHUNK: usize = 1024;

/// Sample mean of a scalar statistic and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Moments {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * w,
        }
    }
}

/// Averages `sample` over `trials` draws.
///
/// `sample` gets the chunk's generator and must consume it deterministically.
pub fn mc_mean<F>(trials: usize, seed: u64, sample: F) -> Result<MeanEstimate>
where
    F: Fn(&mut StreamRng) -> Result<f64> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least one trial".into()));
    }
    let chunks = trials.div_ceil(CHUNK);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let n = CHUNK.min(trials - c * CHUNK);
            let mut acc = Moments::default();
            for _ in 0..n {
                acc.push(sample(&mut rng)?);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if total.n > 1 { total.m2 / (total.n - 1) as f64 } else { 0.0 };
    Ok(MeanEstimate {
        mean: total.mean,
        std_error: (var / total.n as f64).sqrt(),
        trials: total.n,
    })
}
