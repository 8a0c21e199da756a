use super::table::DistributionTable;
use super::MomentSummary;
use crate::error::{domain, Error, Result};
use crate::special::{ln_factorial, LogProb};

/// Largest `n^l` the exact constructor accepts.
pub const BIRTHDAY_MAX_OUTCOMES: f64 = 1e8;

fn check(n: u64, l: u64) -> Result<()> {
    if n < 1 || l < 1 {
        return Err(domain(format!("birthday needs n >= 1 boxes and l >= 1 balls, got n={n}, l={l}")));
    }
    Ok(())
}

fn pairs(b: u64) -> u64 {
    b * b.saturating_sub(1) / 2
}

/// Law of the number of coincident pairs when `l` balls fall uniformly into
/// `n` boxes.
///
/// Equivalent to enumerating all `n^l` assignments, but computed as a DP over
/// boxes: each box contributes `b` balls with weight `1/b!` and `C(b,2)`
/// pairs, and the total weight at `l` balls times `l!/n^l` is the pmf.
pub fn birthday_table_small(n: u64, l: u64) -> Result<DistributionTable> {
    check(n, l)?;
    let outcomes = l as f64 * (n as f64).ln();
    if outcomes > BIRTHDAY_MAX_OUTCOMES.ln() * (1.0 + 1e-12) {
        return Err(Error::SizeGuard(format!(
            "birthday exact table needs n^l <= 1e8, got n={n}, l={l}; use Monte Carlo"
        )));
    }
    if l == 1 {
        return Ok(DistributionTable::point_mass(0));
    }
    let lu = l as usize;
    let max_w = pairs(l) as usize;
    let inv_fact: Vec<f64> = (0..=l).map(|b| (-ln_factorial(b)).exp()).collect();
    // w[s][p]: weight of configurations with s balls placed and p pairs
    let mut w = vec![vec![0.0f64; max_w + 1]; lu + 1];
    w[0][0] = 1.0;
    for _ in 0..n {
        let mut next = vec![vec![0.0f64; max_w + 1]; lu + 1];
        for s in 0..=lu {
            for p in 0..=pairs(s as u64) as usize {
                let x = w[s][p];
                if x == 0.0 {
                    continue;
                }
                for b in 0..=(lu - s) {
                    next[s + b][p + pairs(b as u64) as usize] += x * inv_fact[b];
                }
            }
        }
        w = next;
    }
    let scale = ln_factorial(l) - l as f64 * (n as f64).ln();
    let log_pmf = w[lu]
        .iter()
        .map(|&x| LogProb::clamped(if x > 0.0 { x.ln() + scale } else { f64::NEG_INFINITY }))
        .collect();
    Ok(DistributionTable {
        offset: 0,
        log_pmf,
        truncated_mass: 0.0,
        rel_error: (4 * (n + l) + 16) as f64 * f64::EPSILON * (1.0 + scale.abs()),
    })
}

/// `mu = C(l,2)/n`.
pub fn birthday_mu(n: u64, l: u64) -> Result<f64> {
    check(n, l)?;
    Ok(pairs(l) as f64 / n as f64)
}

/// The pair indicators are pairwise independent, so
/// `sigma2 = C(l,2) (1/n)(1 - 1/n)`.
pub fn birthday_params(n: u64, l: u64) -> Result<MomentSummary> {
    let mu = birthday_mu(n, l)?;
    Ok(MomentSummary { mu, sigma2: mu * (1.0 - 1.0 / n as f64), mu2: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let t = birthday_table_small(2, 3).unwrap();
        assert!((t.pmf(1) - 0.75).abs() < 1e-15);
        assert!((t.pmf(3) - 0.25).abs() < 1e-15);
        assert_eq!(t.pmf(0), 0.0);
        assert_eq!(t.pmf(2), 0.0);
        assert_eq!(birthday_mu(2, 3).unwrap(), 1.5);
        let t = birthday_table_small(4, 2).unwrap();
        assert!((t.pmf(0) - 0.75).abs() < 1e-15);
        assert!((t.pmf(1) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn size_guard() {
        assert!(birthday_table_small(10, 8).is_ok());
        assert!(matches!(birthday_table_small(10, 9), Err(Error::SizeGuard(_))));
        assert!(matches!(birthday_table_small(365, 23), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn moments_match() {
        let t = birthday_table_small(7, 9).unwrap();
        let m = birthday_params(7, 9).unwrap();
        assert!((t.mean() - m.mu).abs() < 1e-12 * m.mu);
        assert!((t.variance() - m.sigma2).abs() < 1e-12 * m.sigma2);
    }
}
