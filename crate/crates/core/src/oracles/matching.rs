use super::table::DistributionTable;
use super::MomentSummary;
use crate::error::{domain, Result};
use crate::special::dd::{Dd, DD_EPS};
use crate::special::{ln_factorial, LogProb};

/// Past this, `1/k!` underflows the double-double range and `ln k!` comes
/// from `lgamma`.
const DD_FACT_MAX: u64 = 170;

/// Law of the number of fixed points of a uniform random permutation of
/// `n` items: `P(W = k) = (1/k!) sum_{j=0}^{n-k} (-1)^j / j!`.
pub fn matching_table(n: u64) -> Result<DistributionTable> {
    if n < 1 {
        return Err(domain("matching needs n >= 1"));
    }
    let n_us = n as usize;
    // partial sums of e^{-1} series, s[m] = sum_{j<=m} (-1)^j/j!
    let mut s = Vec::with_capacity(n_us + 1);
    let mut term = Dd::ONE;
    let mut acc = Dd::ZERO;
    for j in 0..=n {
        if j > 0 {
            term = -term.div_f64(j as f64);
        }
        acc = acc + term;
        s.push(acc);
    }
    let mut inv_fact = Dd::ONE;
    let mut log_pmf = Vec::with_capacity(n_us + 1);
    for k in 0..=n {
        if k > 0 && k <= DD_FACT_MAX {
            inv_fact = inv_fact.div_f64(k as f64);
        }
        let tail = s[(n - k) as usize];
        let ln = if tail.hi <= 0.0 {
            f64::NEG_INFINITY
        } else if k <= DD_FACT_MAX {
            (tail * inv_fact).ln()
        } else {
            tail.ln() - ln_factorial(k)
        };
        log_pmf.push(LogProb::clamped(ln));
    }
    let rel_error = if n > DD_FACT_MAX {
        8.0 * f64::EPSILON * (ln_factorial(n) + 1.0)
    } else {
        1e3 * DD_EPS
    };
    Ok(DistributionTable { offset: 0, log_pmf, truncated_mass: 0.0, rel_error })
}

/// `E W = 1` and `Var W = 1` for `n >= 2` (`W = 1` surely when `n = 1`).
pub fn matching_params(n: u64) -> Result<MomentSummary> {
    match n {
        0 => Err(domain("matching needs n >= 1")),
        1 => Ok(MomentSummary { mu: 1.0, sigma2: 0.0, mu2: None }),
        _ => Ok(MomentSummary { mu: 1.0, sigma2: 1.0, mu2: None }),
    }
}
