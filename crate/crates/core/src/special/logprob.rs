use std::fmt;

use crate::error::{domain, Result};

/// A probability carried as its natural logarithm.
///
/// `-inf` encodes probability zero. Values above zero are rejected by the
/// checked constructors; internal routines clamp tiny positive rounding
/// residue to `0.0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    /// Probability zero.
    pub const IMPOSSIBLE: LogProb = LogProb(f64::NEG_INFINITY);
    /// Probability one.
    pub const CERTAIN: LogProb = LogProb(0.0);

    pub fn new(ln: f64) -> Result<Self> {
        if ln.is_nan() || ln > 0.0 {
            return Err(domain(format!("log-probability must be <= 0, got {ln}")));
        }
        Ok(LogProb(ln))
    }

    pub fn from_prob(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("probability must lie in [0, 1], got {p}")));
        }
        Ok(LogProb(p.ln()))
    }

    /// Clamps rounding residue above zero. NaN is passed through so that it
    /// surfaces in callers' checks.
    pub(crate) fn clamped(ln: f64) -> Self {
        LogProb(if ln > 0.0 { 0.0 } else { ln })
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn prob(self) -> f64 {
        self.0.exp()
    }

    pub fn is_impossible(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `ln(1 - p)`.
    pub fn complement(self) -> LogProb {
        LogProb::clamped(ln_one_minus_exp(self.0))
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ln({:e})", self.prob())
    }
}

/// `ln(1 - e^x)` for `x <= 0`.
pub(crate) fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln(sum exp(x_i))` over raw log values; `-inf` for an empty slice.
pub fn ln_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_infinite() || max.is_nan() {
        return max;
    }
    let s: f64 = xs.iter().map(|x| (x - max).exp()).sum();
    max + s.ln()
}

/// `ln(e^a + e^b)`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^a - e^b)` for `a >= b`; NaN otherwise.
pub fn ln_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a < b {
        return f64::NAN;
    }
    if a == b {
        return f64::NEG_INFINITY;
    }
    a + ln_one_minus_exp(b - a)
}

/// Log of a sum of probabilities.
pub fn log_sum_exp(xs: &[LogProb]) -> LogProb {
    let raw: Vec<f64> = xs.iter().map(|x| x.0).collect();
    // a sum of probabilities may exceed one; keep the raw value
    LogProb(ln_sum_exp(&raw))
}

/// Log of a difference of probabilities, `ln(e^a - e^b)`.
pub fn log_diff_exp(a: LogProb, b: LogProb) -> Result<LogProb> {
    if a.0 < b.0 {
        return Err(domain(format!(
            "log_diff_exp would produce a negative probability ({} < {})",
            a.0, b.0
        )));
    }
    Ok(LogProb(ln_sub_exp(a.0, b.0)))
}
