use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use super::birthday::{birthday_params, birthday_table_small};
use super::matching::{matching_params, matching_table};
use super::occupancy::{occupancy_params, occupancy_table};
use super::poisson_binomial::{
    poisson_binomial_params, poisson_binomial_table, records_params, records_table,
};
use super::table::DistributionTable;
use super::triangles::{max_triangles, triangles_params, triangles_table_small};
use super::two_runs::{two_runs_params, two_runs_table};
use super::MomentSummary;
use crate::error::{domain, Error, Result};

/// The count variables of the six applications (plus records).
#[derive(Debug, Clone, PartialEq)]
pub enum AppModel {
    /// Records among `n` observations, not counting the first.
    Records { n: u64 },
    PoissonBinomial { p: Vec<f64> },
    /// Fixed points of a random permutation of `n`.
    Matching { n: u64 },
    /// Empty boxes, `l` balls into `n` boxes.
    Occupancy { n: u64, l: u64 },
    /// Coincident pairs, `l` balls into `n` boxes.
    Birthday { n: u64, l: u64 },
    /// Triangles in `G(n, p)`.
    Triangles { n: u64, p: f64 },
    /// 2-runs on a circle of `n` Bernoulli(p) trials.
    TwoRuns { n: u64, p: f64 },
}

/// Monte Carlo triangle sampling keeps adjacency rows in one `u64`.
const TRIANGLES_MC_MAX_VERTICES: u64 = 64;

fn prob_ok(p: f64) -> bool {
    p > 0.0 && p < 1.0
}

impl AppModel {
    pub fn name(&self) -> &'static str {
        match self {
            AppModel::Records { .. } => "records",
            AppModel::PoissonBinomial { .. } => "poisson-binomial",
            AppModel::Matching { .. } => "matching",
            AppModel::Occupancy { .. } => "occupancy",
            AppModel::Birthday { .. } => "birthday",
            AppModel::Triangles { .. } => "triangles",
            AppModel::TwoRuns { .. } => "two-runs",
        }
    }

    /// Checks parameter domains.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(domain(msg));
        match *self {
            AppModel::Records { n } if n < 2 => bad(format!("records need n >= 2, got {n}")),
            AppModel::PoissonBinomial { ref p } => match p.iter().find(|&&x| !prob_ok(x)) {
                Some(x) => bad(format!("success probabilities must lie in (0, 1), got {x}")),
                None => Ok(()),
            },
            AppModel::Matching { n } if n < 1 => bad("matching needs n >= 1".into()),
            AppModel::Occupancy { n, l } if n < 2 || l < 1 => {
                bad(format!("occupancy needs n >= 2, l >= 1, got n={n}, l={l}"))
            }
            AppModel::Birthday { n, l } if n < 1 || l < 1 => {
                bad(format!("birthday needs n >= 1, l >= 1, got n={n}, l={l}"))
            }
            AppModel::Triangles { n, p } if n < 1 || !prob_ok(p) => {
                bad(format!("triangles need n >= 1 and p in (0, 1), got n={n}, p={p}"))
            }
            AppModel::TwoRuns { n, p } if n < 3 || !prob_ok(p) => {
                bad(format!("2-runs need n >= 3 and p in (0, 1), got n={n}, p={p}"))
            }
            _ => Ok(()),
        }
    }

    /// Mean and variance from the closed forms.
    pub fn params(&self) -> Result<MomentSummary> {
        match *self {
            AppModel::Records { n } => records_params(n),
            AppModel::PoissonBinomial { ref p } => poisson_binomial_params(p),
            AppModel::Matching { n } => matching_params(n),
            AppModel::Occupancy { n, l } => occupancy_params(n, l),
            AppModel::Birthday { n, l } => birthday_params(n, l),
            AppModel::Triangles { n, p } => triangles_params(n, p),
            AppModel::TwoRuns { n, p } => two_runs_params(n, p),
        }
    }

    /// Exact law, or a size-guard error when only Monte Carlo is feasible.
    pub fn exact_table(&self) -> Result<DistributionTable> {
        match *self {
            AppModel::Records { n } => records_table(n),
            AppModel::PoissonBinomial { ref p } => poisson_binomial_table(p),
            AppModel::Matching { n } => matching_table(n),
            AppModel::Occupancy { n, l } => occupancy_table(n, l),
            AppModel::Birthday { n, l } => birthday_table_small(n, l),
            AppModel::Triangles { n, p } => triangles_table_small(n, p),
            AppModel::TwoRuns { n, p } => two_runs_table(n, p),
        }
    }

    /// Largest value the count can take.
    pub fn max_value(&self) -> u64 {
        match *self {
            AppModel::Records { n } => n - 1,
            AppModel::PoissonBinomial { ref p } => p.len() as u64,
            AppModel::Matching { n } => n,
            AppModel::Occupancy { n, .. } => n - 1,
            AppModel::Birthday { l, .. } => l * (l - 1) / 2,
            AppModel::Triangles { n, .. } => max_triangles(n),
            AppModel::TwoRuns { n, .. } => n,
        }
    }

    /// Stable 64-bit FNV-1a hash of the model tag and parameters.
    pub fn stable_hash(&self) -> u64 {
        let mut h = Fnv::new();
        h.write(self.name().as_bytes());
        match *self {
            AppModel::Records { n } | AppModel::Matching { n } => h.write_u64(n),
            AppModel::PoissonBinomial { ref p } => {
                h.write_u64(p.len() as u64);
                p.iter().for_each(|x| h.write_u64(x.to_bits()));
            }
            AppModel::Occupancy { n, l } | AppModel::Birthday { n, l } => {
                h.write_u64(n);
                h.write_u64(l);
            }
            AppModel::Triangles { n, p } | AppModel::TwoRuns { n, p } => {
                h.write_u64(n);
                h.write_u64(p.to_bits());
            }
        }
        h.0
    }

    pub(crate) fn check_sampleable(&self) -> Result<()> {
        self.validate()?;
        if let AppModel::Triangles { n, .. } = *self {
            if n > TRIANGLES_MC_MAX_VERTICES {
                return Err(Error::SizeGuard(format!(
                    "triangle sampling supports n <= {TRIANGLES_MC_MAX_VERTICES}, got {n}"
                )));
            }
        }
        Ok(())
    }

    /// Draws one value of the count. `scratch` is reused between calls.
    pub(crate) fn sample<R: Rng>(&self, rng: &mut R, scratch: &mut Vec<u64>) -> u64 {
        match *self {
            AppModel::Records { n } => (2..=n).filter(|&i| rng.random_range(0..i) == 0).count() as u64,
            AppModel::PoissonBinomial { ref p } => p.iter().filter(|&&pi| rng.random::<f64>() < pi).count() as u64,
            AppModel::Matching { n } => {
                scratch.clear();
                scratch.extend(0..n);
                scratch.shuffle(rng);
                scratch.iter().enumerate().filter(|&(i, &v)| i as u64 == v).count() as u64
            }
            AppModel::Occupancy { n, l } => {
                fill_boxes(rng, scratch, n, l);
                scratch.iter().filter(|&&c| c == 0).count() as u64
            }
            AppModel::Birthday { n, l } => {
                fill_boxes(rng, scratch, n, l);
                scratch.iter().map(|&c| c * c.saturating_sub(1) / 2).sum()
            }
            AppModel::Triangles { n, p } => {
                let n = n as usize;
                scratch.clear();
                scratch.resize(n, 0);
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.random::<f64>() < p {
                            scratch[i] |= 1 << j;
                            scratch[j] |= 1 << i;
                        }
                    }
                }
                let mut t = 0u64;
                for i in 0..n {
                    let mut row = scratch[i] & bits_above(i);
                    while row != 0 {
                        let j = row.trailing_zeros() as usize;
                        row &= row - 1;
                        t += (scratch[i] & scratch[j] & bits_above(j)).count_ones() as u64;
                    }
                }
                t
            }
            AppModel::TwoRuns { n, p } => {
                let first = rng.random::<f64>() < p;
                let mut prev = first;
                let mut w = 0;
                for _ in 1..n {
                    let x = rng.random::<f64>() < p;
                    w += (prev && x) as u64;
                    prev = x;
                }
                w + (prev && first) as u64
            }
        }
    }
}

/// Mask of bit positions strictly above `i`.
fn bits_above(i: usize) -> u64 {
    if i >= 63 {
        0
    } else {
        !0u64 << (i + 1)
    }
}

fn fill_boxes<R: Rng>(rng: &mut R, counts: &mut Vec<u64>, n: u64, l: u64) {
    counts.clear();
    counts.resize(n as usize, 0);
    for _ in 0..l {
        counts[rng.random_range(0..n) as usize] += 1;
    }
}

impl fmt::Display for AppModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppModel::Records { n } => write!(f, "records(n={n})"),
            AppModel::PoissonBinomial { p } => write!(f, "poisson-binomial(n={})", p.len()),
            AppModel::Matching { n } => write!(f, "matching(n={n})"),
            AppModel::Occupancy { n, l } => write!(f, "occupancy(n={n};l={l})"),
            AppModel::Birthday { n, l } => write!(f, "birthday(n={n};l={l})"),
            AppModel::Triangles { n, p } => write!(f, "triangles(n={n};p={p})"),
            AppModel::TwoRuns { n, p } => write!(f, "two-runs(n={n};p={p})"),
        }
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.write(&x.to_le_bytes());
    }
}
