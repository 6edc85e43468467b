//! Plain Monte Carlo over a box, reproducible for a fixed seed.
//!
//! Samples are drawn in fixed-size chunks; chunk `i` uses ChaCha8 stream `i`
//! of the seeded generator. Chunk statistics are merged in chunk order, so the
//! result is bit-identical whatever the rayon thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{QuadError, QuadResult};

const CHUNK: u64 = 1 << 16;
pub const MIN_SAMPLES: u64 = 10_000;

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let delta = v - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * (other.n as f64 / n as f64);
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64 / n as f64);
        Moments { n, mean, m2 }
    }
}

/// Mean-value estimate of `∫ f` over the box; `err_estimate` is one standard error.
pub fn monte_carlo_nd<F>(f: F, bounds: &[(f64, f64)], samples: u64, seed: u64) -> Result<QuadResult, QuadError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(QuadError::InvalidSampling(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    if bounds.is_empty() {
        return Err(QuadError::InvalidSampling("empty box".into()));
    }
    if let Some(&(lo, hi)) = bounds.iter().find(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi)) {
        return Err(QuadError::InvalidAxis { lo, hi });
    }
    let volume: f64 = bounds.iter().map(|(lo, hi)| hi - lo).product();
    let chunks = samples.div_ceil(CHUNK);

    let per_chunk: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut point = vec![0.0; bounds.len()];
            let mut m = Moments::default();
            for _ in 0..count {
                for (x, (lo, hi)) in point.iter_mut().zip(bounds) {
                    *x = lo + (hi - lo) * rng.random::<f64>();
                }
                m.push(f(&point));
            }
            m
        })
        .collect();

    let total = per_chunk.into_iter().fold(Moments::default(), Moments::merge);
    let variance = if total.n > 1 {
        total.m2 / (total.n - 1) as f64
    } else {
        0.0
    };
    Ok(QuadResult {
        value: volume * total.mean,
        err_estimate: volume * (variance / total.n as f64).sqrt(),
        evaluations: total.n,
    })
}
