use std::fmt::Write as _;

use crate::error::{domain, Result};
use crate::special::{ln_sum_exp, LogProb};

const U: f64 = f64::EPSILON / 2.0;

/// A probability mass function on a window of consecutive integers.
///
/// Entry `i` of `log_pmf` is `ln P(W = offset + i)`. Mass outside the window
/// is at most `truncated_mass`. `rel_error` bounds the relative error of every
/// stored entry before it was rounded to f64 (zero for exact rationals).
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable {
    pub offset: i64,
    pub log_pmf: Vec<LogProb>,
    pub truncated_mass: f64,
    pub rel_error: f64,
}

/// Two-sided enclosure of a tail probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBracket {
    pub lo: f64,
    pub hi: f64,
}

impl TailBracket {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Compensated (Neumaier) summation.
pub(crate) fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

impl DistributionTable {
    /// Builds a table from linear probabilities. Negative entries are rejected;
    /// exact zeros are stored as `-inf`.
    pub fn from_pmf(offset: i64, pmf: &[f64], truncated_mass: f64, rel_error: f64) -> Result<Self> {
        let log_pmf = pmf
            .iter()
            .map(|&p| {
                if p.is_nan() || p < 0.0 {
                    Err(domain(format!("pmf entry must be non-negative, got {p}")))
                } else {
                    Ok(LogProb::clamped(p.ln()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DistributionTable { offset, log_pmf, truncated_mass, rel_error })
    }

    /// A point mass at `w`.
    pub fn point_mass(w: i64) -> Self {
        DistributionTable { offset: w, log_pmf: vec![LogProb::CERTAIN], truncated_mass: 0.0, rel_error: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.log_pmf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_pmf.is_empty()
    }

    /// Largest support point stored.
    pub fn last(&self) -> i64 {
        self.offset + self.log_pmf.len() as i64 - 1
    }

    fn index(&self, j: i64) -> Option<usize> {
        let i = j.checked_sub(self.offset)?;
        (i >= 0 && (i as usize) < self.log_pmf.len()).then_some(i as usize)
    }

    pub fn log_prob_at(&self, j: i64) -> LogProb {
        self.index(j).map_or(LogProb::IMPOSSIBLE, |i| self.log_pmf[i])
    }

    pub fn pmf(&self, j: i64) -> f64 {
        self.log_prob_at(j).prob()
    }

    /// Linear pmf over the stored window.
    pub fn pmf_values(&self) -> Vec<f64> {
        self.log_pmf.iter().map(|l| l.prob()).collect()
    }

    /// Stored mass, compensated.
    pub fn stored_mass(&self) -> f64 {
        neumaier_sum(self.log_pmf.iter().map(|l| l.prob()))
    }

    fn first_index_at_least(&self, k: i64) -> usize {
        (k - self.offset).clamp(0, self.log_pmf.len() as i64) as usize
    }

    /// Stored part of `P(W >= k)`.
    pub fn tail(&self, k: i64) -> f64 {
        let i = self.first_index_at_least(k);
        neumaier_sum(self.log_pmf[i..].iter().map(|l| l.prob()))
    }

    /// Stored part of `ln P(W >= k)`, usable when the tail underflows f64.
    pub fn log_tail(&self, k: i64) -> f64 {
        let i = self.first_index_at_least(k);
        let xs: Vec<f64> = self.log_pmf[i..].iter().map(|l| l.ln()).collect();
        ln_sum_exp(&xs)
    }

    /// `P(W <= k)` over the stored window.
    pub fn cdf(&self, k: i64) -> f64 {
        let i = self.first_index_at_least(k + 1);
        neumaier_sum(self.log_pmf[..i].iter().map(|l| l.prob()))
    }

    /// Rigorous enclosure of `P(W >= k)`: accounts for the construction error,
    /// rounding of each entry to f64 (and through `exp`), the summation error,
    /// and any mass outside the window.
    pub fn tail_bracket(&self, k: i64) -> TailBracket {
        let i = self.first_index_at_least(k);
        let entries = &self.log_pmf[i..];
        let mut err = 0.0;
        let vals: Vec<f64> = entries
            .iter()
            .map(|l| {
                let x = l.prob();
                if x > 0.0 {
                    err += x * (self.rel_error + (3.0 * l.ln().abs() + 4.0) * U);
                }
                x
            })
            .collect();
        let s = neumaier_sum(vals.iter().copied());
        let n = vals.len() as f64;
        err += 4.0 * U * s + n * n * U * U * s;
        // exp of a very negative log can lose everything to subnormals
        err += n * f64::MIN_POSITIVE;
        TailBracket { lo: (s - err).max(0.0), hi: s + err + self.truncated_mass }
    }

    pub fn mean(&self) -> f64 {
        neumaier_sum(
            self.log_pmf
                .iter()
                .enumerate()
                .map(|(i, l)| (self.offset + i as i64) as f64 * l.prob()),
        )
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        neumaier_sum(self.log_pmf.iter().enumerate().map(|(i, l)| {
            let d = (self.offset + i as i64) as f64 - m;
            d * d * l.prob()
        }))
    }

    /// Total variation distance between two tables (stored windows only).
    pub fn total_variation(&self, other: &DistributionTable) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = self.last().max(other.last());
        0.5 * neumaier_sum((lo..=hi).map(|j| (self.pmf(j) - other.pmf(j)).abs()))
    }

    /// True when no interior support point is a strict local minimum.
    pub fn is_unimodal(&self) -> bool {
        let p = self.pmf_values();
        let mut descending = false;
        for w in p.windows(2) {
            if w[1] < w[0] {
                descending = true;
            } else if w[1] > w[0] && descending {
                return false;
            }
        }
        true
    }

    /// CSV with columns `k,pmf,log_pmf`, preceded by `# key=value` lines for
    /// `params` and the truncated mass.
    pub fn to_csv(&self, params: &[(&str, String)]) -> String {
        let mut out = String::new();
        for (k, v) in params {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "# truncated_mass={:.16e}", self.truncated_mass);
        out.push_str("k,pmf,log_pmf\n");
        for (i, l) in self.log_pmf.iter().enumerate() {
            let _ = writeln!(out, "{},{:.16e},{:.16e}", self.offset + i as i64, l.prob(), l.ln());
        }
        out
    }
}
