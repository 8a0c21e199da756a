use crate::error::{domain, Result};
use crate::special::{ln_factorial, ln_sum_exp, LogProb};

fn check(n: u64, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("binomial p must lie in (0, 1), got {p}")));
    }
    if n == 0 {
        return Err(domain("binomial needs n >= 1"));
    }
    Ok(())
}

/// `ln P(Bi(n,p) = j)`.
pub fn binomial_log_pmf(n: u64, p: f64, j: i64) -> Result<LogProb> {
    check(n, p)?;
    if j < 0 || j as u64 > n {
        return Ok(LogProb::IMPOSSIBLE);
    }
    let j = j as u64;
    let ln_c = ln_factorial(n) - ln_factorial(j) - ln_factorial(n - j);
    Ok(LogProb::clamped(ln_c + j as f64 * p.ln() + (n - j) as f64 * (-p).ln_1p()))
}

/// `ln P(Bi(n,p) >= k)`, summing pmf terms in the log domain. Terms beyond
/// the mode are dropped once they fall 40 orders below the running maximum.
pub fn binomial_log_sf(n: u64, p: f64, k: i64) -> Result<LogProb> {
    check(n, p)?;
    if k <= 0 {
        return Ok(LogProb::CERTAIN);
    }
    if k as u64 > n {
        return Ok(LogProb::IMPOSSIBLE);
    }
    let mode = ((n + 1) as f64 * p).floor();
    let mut terms = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for j in k..=n as i64 {
        let t = binomial_log_pmf(n, p, j)?.ln();
        best = best.max(t);
        terms.push(t);
        if j as f64 > mode && t < best - 92.0 {
            break;
        }
    }
    Ok(LogProb::clamped(ln_sum_exp(&terms)))
}
