use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::AppModel;
use crate::error::{precondition, Result};
use crate::exec::Execution;

/// Samples per independent stream. Fixed so that the set of streams, and
/// hence the result, does not depend on the worker count.
pub const MC_BLOCK: u64 = 1 << 14;

/// Smallest accepted sample count.
pub const MC_MIN_SAMPLES: u64 = 10_000;

const Z95: f64 = 1.959964;

/// A Monte Carlo tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

/// Counts of each sampled value, from which any tail can be read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McHistogram {
    pub counts: Vec<u64>,
    pub n_samples: u64,
    pub seed: u64,
}

impl McHistogram {
    /// Estimate of `P(W >= threshold)`.
    pub fn tail_estimate(&self, threshold: i64) -> MonteCarloEstimate {
        let start = threshold.clamp(0, self.counts.len() as i64) as usize;
        let hits: u64 = self.counts[start..].iter().sum();
        let n = self.n_samples as f64;
        let p_hat = hits as f64 / n;
        let stderr = (p_hat * (1.0 - p_hat) / n).sqrt();
        MonteCarloEstimate {
            p_hat,
            stderr,
            n_samples: self.n_samples,
            seed: self.seed,
            ci95_low: (p_hat - Z95 * stderr).max(0.0),
            ci95_high: (p_hat + Z95 * stderr).min(1.0),
        }
    }

    pub fn mean(&self) -> f64 {
        let s: f64 = self.counts.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum();
        s / self.n_samples as f64
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// ChaCha key for one (seed, model) pair.
fn stream_key(seed: u64, model_hash: u64) -> [u8; 32] {
    let mut st = seed ^ model_hash.rotate_left(17);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut st).to_le_bytes());
    }
    key
}

/// Samples the count `n_samples` times into a histogram.
///
/// Block `b` uses stream `b` of a ChaCha8 generator keyed by the seed and the
/// model hash, so output is bit-identical for any execution policy.
pub fn monte_carlo_histogram(model: &AppModel, n_samples: u64, seed: u64, exec: Execution) -> Result<McHistogram> {
    if n_samples < MC_MIN_SAMPLES {
        return Err(precondition(format!("Monte Carlo needs at least {MC_MIN_SAMPLES} samples, got {n_samples}")));
    }
    model.check_sampleable()?;
    let key = stream_key(seed, model.stable_hash());
    let width = model.max_value() as usize + 1;
    let blocks = n_samples.div_ceil(MC_BLOCK) as usize;
    let parts = exec.map_indexed(blocks, |b| {
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(b as u64);
        let start = b as u64 * MC_BLOCK;
        let len = MC_BLOCK.min(n_samples - start);
        let mut counts = vec![0u64; width];
        let mut scratch = Vec::new();
        for _ in 0..len {
            counts[model.sample(&mut rng, &mut scratch) as usize] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; width];
    for part in parts {
        for (a, b) in counts.iter_mut().zip(part) {
            *a += b;
        }
    }
    Ok(McHistogram { counts, n_samples, seed })
}

/// Estimate of `P(W - a >= k)`.
pub fn monte_carlo_tail(model: &AppModel, a: i64, k: i64, n_samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    monte_carlo_tail_with(model, a, k, n_samples, seed, Execution::default())
}

pub fn monte_carlo_tail_with(
    model: &AppModel,
    a: i64,
    k: i64,
    n_samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<MonteCarloEstimate> {
    Ok(monte_carlo_histogram(model, n_samples, seed, exec)?.tail_estimate(a.saturating_add(k)))
}
