//! Poisson point and tail probabilities in log domain.
//!
//! Tails go through the regularized incomplete gamma function:
//! `P(Y >= k) = P(k, lambda)` and `P(Y <= k) = Q(k + 1, lambda)`. Whichever
//! of `P`/`Q` is small is evaluated directly (lower series when
//! `lambda < a + 1`, upper continued fraction otherwise) and the other is
//! obtained by a log-domain complement, which keeps relative accuracy in both
//! tails.

use super::logprob::{ln_one_minus_exp, LogProb};
use crate::error::{domain, Result};

const MAX_ITER: usize = 1_000_000;
const SERIES_EPS: f64 = 1e-17;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// `ln(k!)`.
pub fn ln_factorial(k: u64) -> f64 {
    // exact table for small k keeps the tiny cases bit-clean
    const SMALL: [f64; 13] = [
        1.0,
        1.0,
        2.0,
        6.0,
        24.0,
        120.0,
        720.0,
        5040.0,
        40320.0,
        362880.0,
        3628800.0,
        39916800.0,
        479001600.0,
    ];
    if (k as usize) < SMALL.len() {
        SMALL[k as usize].ln()
    } else {
        libm::lgamma(k as f64 + 1.0)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!("Poisson mean must be positive and finite, got {lambda}")));
    }
    Ok(())
}

#[inline]
fn ln_pmf_raw(lambda: f64, k: u64) -> f64 {
    if k == 0 {
        return -lambda;
    }
    k as f64 * lambda.ln() - lambda - ln_factorial(k)
}

/// `ln P(Y = k)` for `Y ~ Poisson(lambda)`.
pub fn log_poisson_pmf(lambda: f64, k: i64) -> Result<LogProb> {
    check_lambda(lambda)?;
    if k < 0 {
        return Err(domain(format!("Poisson support point must be >= 0, got {k}")));
    }
    Ok(LogProb::clamped(ln_pmf_raw(lambda, k as u64)))
}

/// `ln P(a, x)`, regularized lower incomplete gamma, integer shape `a >= 1`.
fn ln_reg_lower(a: u64, x: f64) -> f64 {
    if x < a as f64 + 1.0 {
        ln_lower_series(a, x)
    } else {
        ln_one_minus_exp(ln_upper_cf(a, x))
    }
}

/// `ln Q(a, x)`, regularized upper incomplete gamma, integer shape `a >= 1`.
fn ln_reg_upper(a: u64, x: f64) -> f64 {
    if x < a as f64 + 1.0 {
        ln_one_minus_exp(ln_lower_series(a, x))
    } else {
        ln_upper_cf(a, x)
    }
}

/// Series `P(a,x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))`.
/// The prefactor is the Poisson point mass at `a`.
fn ln_lower_series(a: u64, x: f64) -> f64 {
    let af = a as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..MAX_ITER {
        term *= x / (af + n as f64);
        sum += term;
        if term < sum * SERIES_EPS {
            break;
        }
    }
    ln_pmf_raw(x, a) + sum.ln()
}

/// Continued fraction for `Q(a,x)` (modified Lentz). Prefactor
/// `x^a e^-x / Gamma(a) = x * P(Y = a-1)`.
fn ln_upper_cf(a: u64, x: f64) -> f64 {
    let af = a as f64;
    let mut b = x + 1.0 - af;
    let mut c = 1.0 / CF_TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        let an = -fi * (fi - af);
        b += 2.0;
        d = an * d + b;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = b + an / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            break;
        }
    }
    x.ln() + ln_pmf_raw(x, a - 1) + h.ln()
}

/// `ln P(Y >= k)`.
pub fn log_poisson_sf(lambda: f64, k: i64) -> Result<LogProb> {
    check_lambda(lambda)?;
    if k < 0 {
        return Err(domain(format!("tail threshold must be >= 0, got {k}")));
    }
    if k == 0 {
        return Ok(LogProb::CERTAIN);
    }
    Ok(LogProb::clamped(ln_reg_lower(k as u64, lambda)))
}

/// `ln P(Y <= k)`; any negative `k` is the empty event.
pub fn log_poisson_cdf(lambda: f64, k: i64) -> Result<LogProb> {
    check_lambda(lambda)?;
    if k < 0 {
        return Ok(LogProb::IMPOSSIBLE);
    }
    Ok(LogProb::clamped(ln_reg_upper(k as u64 + 1, lambda)))
}

/// `pi_k`, `F(k-1)` and `Fbar(k)` of a Poisson law, all in log domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonTailTriple {
    pub lambda: f64,
    pub k: i64,
    pub log_pmf_k: LogProb,
    pub log_cdf_km1: LogProb,
    pub log_sf_k: LogProb,
}

pub fn poisson_tail_triple(lambda: f64, k: i64) -> Result<PoissonTailTriple> {
    Ok(PoissonTailTriple {
        lambda,
        k,
        log_pmf_k: log_poisson_pmf(lambda, k)?,
        log_cdf_km1: log_poisson_cdf(lambda, k - 1)?,
        log_sf_k: log_poisson_sf(lambda, k)?,
    })
}
