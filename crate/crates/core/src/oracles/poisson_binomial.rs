use super::table::DistributionTable;
use super::MomentSummary;
use crate::error::{domain, Result};
use crate::special::dd::{Dd, DD_EPS};
use crate::special::LogProb;

/// Default absolute budget for mass dropped from the window edges. Any tail
/// above ~1e-285 is then bracketed to relative 1e-15 or better.
pub const DEFAULT_DROP_BUDGET: f64 = 1e-300;

/// Up to this many trials the full support is kept.
const FULL_SUPPORT_MAX: usize = 5000;

fn check_probs(p: &[f64]) -> Result<()> {
    match p.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        Some(x) => Err(domain(format!("success probabilities must lie in (0, 1), got {x}"))),
        None => Ok(()),
    }
}

/// Exact law of a sum of independent Bernoulli(p_i) variables.
///
/// Full support for up to 5000 trials, otherwise an adaptive window with
/// [`DEFAULT_DROP_BUDGET`].
pub fn poisson_binomial_table(p: &[f64]) -> Result<DistributionTable> {
    let budget = if p.len() <= FULL_SUPPORT_MAX { 0.0 } else { DEFAULT_DROP_BUDGET };
    poisson_binomial_table_with_budget(p, budget)
}

/// As [`poisson_binomial_table`] with an explicit drop budget (`0` keeps the
/// full support).
pub fn poisson_binomial_table_with_budget(p: &[f64], budget: f64) -> Result<DistributionTable> {
    check_probs(p)?;
    if !(budget >= 0.0) {
        return Err(domain("drop budget must be non-negative"));
    }
    let steps = p.iter().map(|&x| (Dd::from_f64(x), Dd::one_minus(x)));
    Ok(convolve(steps, p.len(), budget, 0.0))
}

/// Law of `S_n`, the number of records among `n` exchangeable continuous
/// observations not counting the first: independent indicators with
/// `P(I_i = 1) = 1/i`, `i = 2..=n`.
pub fn records_table(n: u64) -> Result<DistributionTable> {
    records_table_with_budget(n, if n as usize <= FULL_SUPPORT_MAX { 0.0 } else { DEFAULT_DROP_BUDGET })
}

pub fn records_table_with_budget(n: u64, budget: f64) -> Result<DistributionTable> {
    if n < 2 {
        return Err(domain(format!("records need n >= 2, got {n}")));
    }
    let steps = (2..=n).map(|i| {
        let p = Dd::recip_u64(i);
        let q = Dd::from_f64((i - 1) as f64).div_f64(i as f64);
        (p, q)
    });
    // 1/i and (i-1)/i carry one double-double rounding each
    Ok(convolve(steps, (n - 1) as usize, budget, 2.0 * DD_EPS))
}

/// Windowed double-double convolution. Edge entries are dropped while the
/// running total of dropped mass stays within `budget * step / n`.
fn convolve(steps: impl Iterator<Item = (Dd, Dd)>, n: usize, budget: f64, input_rel: f64) -> DistributionTable {
    let mut cur = vec![Dd::ONE];
    let mut nxt: Vec<Dd> = Vec::new();
    let mut base: i64 = 0;
    let mut dropped = 0.0f64;
    let up = 1.0 + 4.0 * f64::EPSILON;
    for (step, (p, q)) in steps.enumerate() {
        nxt.clear();
        nxt.push(cur[0] * q);
        for j in 1..cur.len() {
            nxt.push(cur[j] * q + cur[j - 1] * p);
        }
        nxt.push(cur[cur.len() - 1] * p);

        let allowance = budget * (step + 1) as f64 / n as f64;
        let mut s = 0;
        let mut e = nxt.len();
        if budget > 0.0 {
            while e - s > 1 {
                let v = nxt[s].to_f64() * up;
                if dropped + v > allowance {
                    break;
                }
                dropped += v;
                s += 1;
            }
            while e - s > 1 {
                let v = nxt[e - 1].to_f64() * up;
                if dropped + v > allowance {
                    break;
                }
                dropped += v;
                e -= 1;
            }
        }
        base += s as i64;
        cur.clear();
        cur.extend_from_slice(&nxt[s..e]);
    }
    let log_pmf = cur.iter().map(|v| LogProb::clamped(v.ln())).collect();
    DistributionTable {
        offset: base,
        log_pmf,
        truncated_mass: dropped,
        rel_error: n as f64 * (8.0 * DD_EPS + input_rel),
    }
}

/// Moments of a Poisson-binomial law, including `mu2 = sum p_i^2`.
pub fn poisson_binomial_params(p: &[f64]) -> Result<MomentSummary> {
    check_probs(p)?;
    let mu: Dd = p.iter().map(|&x| Dd::from_f64(x)).sum();
    let mu2: Dd = p.iter().map(|&x| Dd::from_f64(x) * Dd::from_f64(x)).sum();
    let sigma2 = mu - mu2;
    Ok(MomentSummary { mu: mu.to_f64(), sigma2: sigma2.to_f64(), mu2: Some(mu2.to_f64()) })
}

/// `lambda_n = sum_{i=2}^n 1/i`, its variance `sum 1/i (1 - 1/i)` and
/// `mu2 = sum_{i=2}^n 1/i^2`.
pub fn records_params(n: u64) -> Result<MomentSummary> {
    if n < 2 {
        return Err(domain(format!("records need n >= 2, got {n}")));
    }
    // smallest terms first
    let mut mu = Dd::ZERO;
    let mut mu2 = Dd::ZERO;
    for i in (2..=n).rev() {
        let r = Dd::recip_u64(i);
        mu = mu + r;
        mu2 = mu2 + r * r;
    }
    Ok(MomentSummary { mu: mu.to_f64(), sigma2: (mu - mu2).to_f64(), mu2: Some(mu2.to_f64()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_coin() {
        let t = poisson_binomial_table(&[0.5]).unwrap();
        assert_eq!(t.pmf_values(), vec![0.5, 0.5]);
        assert_eq!(t.truncated_mass, 0.0);
    }

    #[test]
    fn records_three() {
        let t = records_table(3).unwrap();
        let v = t.pmf_values();
        assert!((v[0] - 1.0 / 3.0).abs() < 1e-16);
        assert!((v[1] - 0.5).abs() < 1e-16);
        assert!((v[2] - 1.0 / 6.0).abs() < 1e-16);
        let m = records_params(3).unwrap();
        assert!((m.mu - 5.0 / 6.0).abs() < 1e-16);
        assert!((m.sigma2 - 17.0 / 36.0).abs() < 1e-16);
        let m2 = records_params(2).unwrap();
        assert_eq!((m2.mu, m2.sigma2), (0.5, 0.25));
    }

    #[test]
    fn domain_errors() {
        assert!(poisson_binomial_table(&[0.0]).is_err());
        assert!(poisson_binomial_table(&[0.5, 1.0]).is_err());
        assert!(poisson_binomial_table(&[f64::NAN]).is_err());
        assert!(records_table(1).is_err());
        assert!(records_params(1).is_err());
    }

    #[test]
    fn window_keeps_budget() {
        let t = records_table_with_budget(20_000, DEFAULT_DROP_BUDGET).unwrap();
        assert!(t.truncated_mass <= DEFAULT_DROP_BUDGET);
        assert!(t.len() < 400);
        let total = t.stored_mass() + t.truncated_mass;
        assert!((total - 1.0).abs() < 1e-13);
        let m = records_params(20_000).unwrap();
        assert!((t.mean() - m.mu).abs() < 1e-12 * m.mu);
    }
}
