use crate::error::{domain, precondition, Result};
use crate::special::{log_poisson_cdf, log_poisson_pmf, log_poisson_sf};

/// Sup-norm constants of the Stein solution for `h = 1[k, inf)`, each
/// divided by `P(Y >= k)`, together with the naive total-variation factor
/// `(1 - e^-lambda) / (lambda P(Y >= k))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinFactorSet {
    pub lambda: f64,
    pub k: u64,
    /// `||f|| / P(Y >= k)`
    pub c0: f64,
    /// `sup_{i <= k-1} |Delta f(i)| / P(Y >= k)`
    pub c1_minus: f64,
    /// `sup_{i >= k} |Delta f(i)| / P(Y >= k)`
    pub c1_plus: f64,
    pub c1: f64,
    pub c2: f64,
    pub naive: f64,
}

/// Evaluates the constants at `(lambda, k)`; requires integer `k > lambda`, `k >= 1`.
///
/// Every ratio of Poisson tails is formed as a difference of logs, so the
/// result stays accurate when `P(Y >= k)` is far below f64 range.
pub fn stein_factors(lambda: f64, k: i64) -> Result<SteinFactorSet> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(domain(format!("lambda must be positive and finite, got {lambda}")));
    }
    if k < 1 {
        return Err(domain(format!("k must be a positive integer, got {k}")));
    }
    if (k as f64) <= lambda {
        return Err(precondition(format!("Stein factors need k > lambda (k = {k}, lambda = {lambda})")));
    }
    let ln_lambda = lambda.ln();
    let ln_k = (k as f64).ln();

    let ln_cdf_km1 = log_poisson_cdf(lambda, k - 1)?.ln();
    let ln_cdf_km2 = log_poisson_cdf(lambda, k - 2)?.ln();
    let ln_pmf_k = log_poisson_pmf(lambda, k)?.ln();
    let ln_sf_k = log_poisson_sf(lambda, k)?.ln();
    let ln_sf_kp1 = log_poisson_sf(lambda, k + 1)?.ln();

    let c0 = (ln_cdf_km1 - ln_k - ln_pmf_k).exp();

    // 1 - F(k-2)/F(k-1) * lambda/(k-1); F(-1) = 0 makes this 1 at k = 1
    let left_gap = if k == 1 {
        1.0
    } else {
        let ln_left = ln_cdf_km2 - ln_cdf_km1 + ln_lambda - ((k - 1) as f64).ln();
        -ln_left.exp_m1()
    };
    // 1 - Fbar(k+1)/Fbar(k) * k/lambda
    let ln_right = ln_sf_kp1 - ln_sf_k + ln_k - ln_lambda;
    let right_gap = -ln_right.exp_m1();

    let c1_minus = scale(c0, left_gap);
    let c1_plus = scale(c0, right_gap);
    let naive = ((-(-lambda).exp_m1()).ln() - ln_lambda - ln_sf_k).exp();

    Ok(SteinFactorSet {
        lambda,
        k: k as u64,
        c0,
        c1_minus,
        c1_plus,
        c1: c1_minus.max(c1_plus),
        c2: c1_minus + c1_plus,
        naive,
    })
}

// inf * 0 must not poison the set with NaN
fn scale(c: f64, gap: f64) -> f64 {
    if gap == 0.0 {
        0.0
    } else {
        c * gap
    }
}

impl SteinFactorSet {
    /// `c1 / naive` and `c2 / naive`.
    pub fn naive_ratios(&self) -> (f64, f64) {
        (self.c1 / self.naive, self.c2 / self.naive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_one_k_two() {
        let s = stein_factors(1.0, 2).unwrap();
        assert!((s.c0 - 2.0).abs() < 1e-14);
        assert!((s.c1_minus - 1.0).abs() < 1e-14);
        assert!((s.c1 - 1.0).abs() < 1e-14);
        assert!((s.c1_plus - 0.784_422_382_354_665_6).abs() < 1e-14);
        assert!((s.c2 - 1.784_42).abs() < 1e-5);
    }

    #[test]
    fn boundary_k_one_uses_empty_cdf() {
        // c1_minus = c0 = F(0)/(1 * pi_1) = 1/lambda
        let s = stein_factors(0.5, 1).unwrap();
        assert!((s.c0 - 2.0).abs() < 1e-14);
        assert_eq!(s.c1_minus, s.c0);
    }

    #[test]
    fn rejects_outside_regime() {
        assert!(matches!(stein_factors(2.0, 2), Err(crate::Error::Precondition(_))));
        assert!(matches!(stein_factors(2.5, 2), Err(crate::Error::Precondition(_))));
        assert!(matches!(stein_factors(0.5, 0), Err(crate::Error::Domain(_))));
        assert!(matches!(stein_factors(-1.0, 3), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn structural_identities() {
        for &(lambda, k) in &[(0.3, 1), (1.0, 5), (7.5, 9), (10.0, 43), (25.0, 60)] {
            let s = stein_factors(lambda, k).unwrap();
            assert_eq!(s.c1, s.c1_minus.max(s.c1_plus));
            assert!((s.c2 - (s.c1_minus + s.c1_plus)).abs() <= 1e-12 * s.c2);
            assert!(s.c1_minus >= 0.0 && s.c1_minus <= s.c0);
            assert!(s.c1_plus >= 0.0 && s.c1_plus <= s.c0);
            assert!(s.c1 <= s.naive && s.c2 <= 2.0 * s.naive, "{s:?}");
        }
    }
}
