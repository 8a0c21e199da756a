use super::table::DistributionTable;
use super::MomentSummary;
use crate::error::{domain, Result};
use crate::special::LogProb;

fn check(n: u64, p: f64) -> Result<()> {
    if n < 3 {
        return Err(domain(format!("2-runs need n >= 3, got {n}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("success probability must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// Law of `W = sum_i xi_i xi_{i+1}` on a circle of `n` Bernoulli(p) trials
/// (`xi_{n+1} = xi_1`).
///
/// Transfer DP conditioned on `xi_1`; the state is (current bit, runs so
/// far), and the closing pair `xi_n xi_1` is added at the end.
pub fn two_runs_table(n: u64, p: f64) -> Result<DistributionTable> {
    check(n, p)?;
    let q = 1.0 - p;
    let nu = n as usize;
    let mut pmf = vec![0.0f64; nu + 1];
    for first in 0..2usize {
        // dp[bit][count]
        let mut dp = [vec![0.0f64; nu + 1], vec![0.0f64; nu + 1]];
        dp[first][0] = if first == 1 { p } else { q };
        for step in 1..nu {
            let mut next = [vec![0.0f64; nu + 1], vec![0.0f64; nu + 1]];
            for c in 0..step {
                let (z, o) = (dp[0][c], dp[1][c]);
                next[0][c] += (z + o) * q;
                next[1][c] += z * p;
                next[1][c + 1] += o * p;
            }
            dp = next;
        }
        for c in 0..nu {
            pmf[c] += dp[0][c];
            pmf[c + first] += dp[1][c];
        }
    }
    let log_pmf = pmf
        .iter()
        .map(|&x| LogProb::clamped(if x > 0.0 { x.ln() } else { f64::NEG_INFINITY }))
        .collect();
    Ok(DistributionTable { offset: 0, log_pmf, truncated_mass: 0.0, rel_error: 4.0 * (n as f64 + 4.0) * f64::EPSILON })
}

/// `mu = n p^2` and `sigma2 = n p^2 (1-p)(3p+1)`.
pub fn two_runs_params(n: u64, p: f64) -> Result<MomentSummary> {
    check(n, p)?;
    let mu = n as f64 * p * p;
    Ok(MomentSummary { mu, sigma2: mu * (1.0 - p) * (3.0 * p + 1.0), mu2: None })
}
