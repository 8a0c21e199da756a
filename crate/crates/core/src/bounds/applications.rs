use std::f64::consts::PI;

use super::generic::{
    corollary1_bound, left_tail_bound, size_bias_e_abs, theorem12_bound, theorem1_bound, BoundBreakdown,
    Corollary1Summand, CouplingKind, SizeBiasSummary, TailShiftQuery, Theorem1Ingredients,
};
use crate::error::{domain, precondition, Result};
use crate::oracles::{
    birthday_mu, occupancy_params, poisson_binomial_params, records_params, triangles_params, two_runs_params,
};
use crate::special::EULER_GAMMA;

/// `min(1, sqrt(2/pi) (sum_i p_i ^ (1-p_i) - 1/4)^{-1/2})`, the bound on the
/// largest point probability of a Poisson-binomial law with one trial
/// removed; `1` when the inner sum is at most `1/4`.
pub fn pb_theta(p: &[f64]) -> f64 {
    let s: f64 = p.iter().map(|&x| x.min(1.0 - x)).sum::<f64>() - 0.25;
    if s <= 0.0 {
        1.0
    } else {
        (2.0 / (PI * s)).sqrt().min(1.0)
    }
}

/// Non-shifted Poisson-binomial bound `C1(mu, k) mu2`.
pub fn pb_bound_a0(p: &[f64], k: i64) -> Result<BoundBreakdown> {
    let m = poisson_binomial_params(p)?;
    let mu2 = m.mu2.unwrap_or(m.mu - m.sigma2);
    let q = TailShiftQuery::new(m.mu, 0, k)?;
    // negatively related: mu E|W+1-W^s| = mu - sigma2 = mu2
    let e_abs = size_bias_e_abs(CouplingKind::NegativelyRelated, m.mu, m.sigma2, mu2)?;
    let sb = SizeBiasSummary { e_abs, coupling_kind: CouplingKind::NegativelyRelated };
    theorem12_bound(m.mu, &sb, &q, 0.0)
}

/// Shift used by the translated Poisson-binomial bound, `floor(mu2)`.
pub fn pb_shift(p: &[f64]) -> Result<i64> {
    let m = poisson_binomial_params(p)?;
    Ok(m.mu2.unwrap_or(0.0).floor() as i64)
}

/// Translated Poisson-binomial bound with `a = floor(mu2)`:
/// `C2 sum p_i^2(1-p_i) theta + C1 |lambda - sigma2| + left tail`.
///
/// The left tail is exactly zero when `a = 0`; otherwise the exponential
/// bound `exp(-(lambda+2)^2/(2 mu))` is used.
pub fn pb_bound_shifted(p: &[f64], k: i64) -> Result<BoundBreakdown> {
    let m = poisson_binomial_params(p)?;
    let a = pb_shift(p)?;
    let q = TailShiftQuery::new(m.mu, a, k)?;
    let theta = pb_theta(p);
    let summands: Vec<Corollary1Summand> = p
        .iter()
        .map(|&pi| Corollary1Summand { theta, mu: pi, e_x_centered_x: pi * (1.0 - pi), e_abs_falling: 0.0 })
        .collect();
    let left = if a <= 0 { 0.0 } else { left_tail_bound(m.mu, a, m.mu)? };
    corollary1_bound(&summands, &q, m.sigma2, left)
}

/// `e^{13/12} sqrt(2 pi)`.
fn stirling_const() -> f64 {
    (13.0f64 / 12.0).exp() * (2.0 * PI).sqrt()
}

/// Inputs of the one-sided Poisson-binomial bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_snake_case)]
pub struct ProdBinLowerBoundInputs {
    pub mu: f64,
    pub mu2: f64,
    /// `(k - mu)/sqrt(mu)`.
    pub x: f64,
    pub M: f64,
}

impl ProdBinLowerBoundInputs {
    /// `M = e^mu` for `mu < 1`, else `e^{13/12} sqrt(2 pi) (1 - mu2/mu)^{-1/2}`.
    pub fn new(mu: f64, mu2: f64, k: i64) -> Result<Self> {
        if !(mu > 0.0) || !(mu2 >= 0.0) {
            return Err(domain(format!("need mu > 0 and mu2 >= 0, got mu={mu}, mu2={mu2}")));
        }
        let x = (k as f64 - mu) / mu.sqrt();
        let m = if mu < 1.0 {
            mu.exp()
        } else {
            if mu2 >= mu {
                return Err(domain(format!("M is undefined for mu >= 1 unless mu2 < mu, got mu={mu}, mu2={mu2}")));
            }
            stirling_const() / (1.0 - mu2 / mu).sqrt()
        };
        Ok(ProdBinLowerBoundInputs { mu, mu2, x, M: m })
    }

    pub fn from_probs(p: &[f64], k: i64) -> Result<Self> {
        let m = poisson_binomial_params(p)?;
        Self::new(m.mu, m.mu2.unwrap_or(0.0), k)
    }
}

/// Bracket `(lower, 0)` for `P(W >= k)/Pn(mu)([k, inf)) - 1`, with
/// `lower = -2M (mu2/mu)(x^2 + 1 + 4x sqrt((1 - e^{-mu})/mu))`.
pub fn pb_lower_bound(inputs: &ProdBinLowerBoundInputs) -> Result<(f64, f64)> {
    let ProdBinLowerBoundInputs { mu, mu2, x, M: m } = *inputs;
    if !(x >= 1.0) {
        return Err(precondition(format!("need x = (k - mu)/sqrt(mu) >= 1, got {x}")));
    }
    let shape = x * x + 1.0 + 4.0 * x * (-(-mu).exp_m1() / mu).sqrt();
    Ok((-2.0 * m * (mu2 / mu) * shape, 0.0))
}

/// Magnitude of the records lower bracket: `P(S_n >= k)/Pn(lambda_n)([k,
/// inf)) - 1 > -records_bound(n, k)`, using only harmonic-sum estimates.
pub fn records_bound(n: u64, k: i64) -> Result<f64> {
    let lambda = records_params(n)?.mu;
    records_bound_at(n, (k as f64 - lambda) / lambda.sqrt())
}

/// [`records_bound`] as a function of `x = (k - lambda_n)/sqrt(lambda_n)`.
pub fn records_bound_at(n: u64, x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(precondition(format!("need x = (k - lambda_n)/sqrt(lambda_n) >= 1, got {x}")));
    }
    let l = (n as f64).ln() + EULER_GAMMA;
    let zeta2 = PI * PI / 6.0;
    if l - zeta2 <= 0.0 {
        return Err(precondition(format!("n={n} too small: ln n + gamma - pi^2/6 must be positive")));
    }
    let lead = 2.0 * stirling_const() * (zeta2 - 1.0) / ((l - 1.0) * (l - zeta2)).sqrt();
    Ok(lead * (x * x + 1.0 + 4.0 * x / (l - 1.0).sqrt()))
}

fn size_biased(mu: f64, e_abs: f64, kind: CouplingKind, k: i64) -> Result<BoundBreakdown> {
    let q = TailShiftQuery::new(mu, 0, k)?;
    theorem12_bound(mu, &SizeBiasSummary { e_abs, coupling_kind: kind }, &q, 0.0)
}

/// Matching: `(2/n) C1(1, k)`, for `n >= 2` and `k >= 2`.
pub fn matching_bound(n: u64, k: i64) -> Result<BoundBreakdown> {
    if n < 2 {
        return Err(domain(format!("matching bound needs n >= 2, got {n}")));
    }
    if k < 2 {
        return Err(precondition(format!("matching bound needs k >= 2, got {k}")));
    }
    size_biased(1.0, 2.0 / n as f64, CouplingKind::Custom, k)
}

/// Occupancy: `C1(mu, k) mu [mu - (n-1)(1 - 1/(n-1))^l]`.
pub fn occupancy_bound(n: u64, l: u64, k: i64) -> Result<BoundBreakdown> {
    let m = occupancy_params(n, l)?;
    if !(m.mu > 0.0) {
        return Err(precondition(format!("occupancy mean underflows for n={n}, l={l}")));
    }
    let pair = if n == 2 { 0.0 } else { (l as f64 * (-1.0 / (n as f64 - 1.0)).ln_1p()).exp() };
    let e_abs = (m.mu - (n as f64 - 1.0) * pair).max(0.0);
    size_biased(m.mu, e_abs, CouplingKind::NegativelyRelated, k)
}

/// Birthday: `C1(mu, k) mu (1 + 2l)/n`.
pub fn birthday_bound(n: u64, l: u64, k: i64) -> Result<BoundBreakdown> {
    let mu = birthday_mu(n, l)?;
    if l < 2 {
        return Err(domain("birthday bound needs l >= 2 balls"));
    }
    size_biased(mu, (1.0 + 2.0 * l as f64) / n as f64, CouplingKind::Custom, k)
}

/// Triangles: `C1(mu, k) mu (3(n-3) p^2 (1-p) + p^3)`.
pub fn triangles_bound(n: u64, p: f64, k: i64) -> Result<BoundBreakdown> {
    let m = triangles_params(n, p)?;
    if n < 3 {
        return Err(domain("triangle bound needs n >= 3"));
    }
    let e_abs = 3.0 * (n - 3) as f64 * p * p * (1.0 - p) + p * p * p;
    size_biased(m.mu, e_abs, CouplingKind::PositivelyRelated, k)
}

/// 2-runs without shift: `C1(mu, k) n p^3 (2 - p)`.
pub fn two_runs_bound_a0(n: u64, p: f64, k: i64) -> Result<BoundBreakdown> {
    let m = two_runs_params(n, p)?;
    size_biased(m.mu, p * (2.0 - p), CouplingKind::PositivelyRelated, k)
}

/// Shift of the translated 2-runs bound, `floor(n p^3 (3p - 2))`.
pub fn two_runs_shift(n: u64, p: f64) -> i64 {
    (n as f64 * p * p * p * (3.0 * p - 2.0)).floor() as i64
}

/// Local-dependence ingredients of the translated 2-runs bound.
pub fn two_runs_theorem1_ingredients(n: u64, p: f64) -> Result<(TailShiftQuery, Theorem1Ingredients)> {
    if n < 9 || !(p < 2.0 / 3.0) {
        return Err(precondition(format!("translated 2-runs bound needs n >= 9 and p < 2/3, got n={n}, p={p}")));
    }
    let m = two_runs_params(n, p)?;
    let a = two_runs_shift(n, p);
    let lambda = m.mu - a as f64;
    let nf = n as f64;
    let q1 = 1.0 - p;
    let sum_term = 9.2 * nf * p * p * (1.0 + 5.0 * p) / ((nf - 8.0) * q1 * q1 * q1).sqrt();
    // a <= 0, so W - a < -1 is impossible
    let ing = Theorem1Ingredients { sum_term, abs_lambda_minus_sigma2: lambda.min(1.0), left_tail: 0.0 };
    Ok((TailShiftQuery { a, lambda, k: 0 }, ing))
}

/// Translated 2-runs bound:
/// `C2(lambda, k) 9.2 n p^2 (1+5p)/sqrt((n-8)(1-p)^3) + C1(lambda, k)(1 ^ lambda)`.
pub fn two_runs_bound_shifted(n: u64, p: f64, k: i64) -> Result<BoundBreakdown> {
    let (q, ing) = two_runs_theorem1_ingredients(n, p)?;
    let q = TailShiftQuery::with_lambda(q.a, q.lambda, k)?;
    theorem1_bound(&ing, &q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::generic::{C1_MU_TERM, MAIN_C2_TERM};
    use crate::stein::stein_factors;

    #[test]
    fn matching_example() {
        let b = matching_bound(10, 3).unwrap();
        assert!((b.total - 0.6).abs() < 1e-12);
        assert!(matching_bound(10, 1).is_err());
    }

    #[test]
    fn single_coin_a0() {
        let b = pb_bound_a0(&[0.5], 1).unwrap();
        let c1 = stein_factors(0.5, 1).unwrap().c1;
        assert!((b.total - 0.25 * c1).abs() < 1e-15);
        assert_eq!(b.term(C1_MU_TERM), Some(b.total));
    }

    #[test]
    fn pb_theta_branches() {
        let t = pb_theta(&[0.5; 4]);
        assert!((1.0 / t - 1.657_978_760_989_135_4).abs() < 1e-12);
        assert_eq!(pb_theta(&[0.1, 0.1]), 1.0);
    }

    #[test]
    fn prop_bracket_branches() {
        let i = ProdBinLowerBoundInputs::new(0.5, 0.1, 3).unwrap();
        assert!((i.M - 0.5f64.exp()).abs() < 1e-15);
        let i = ProdBinLowerBoundInputs::new(1.0, 0.5, 3).unwrap();
        assert!((i.M - stirling_const() * 2f64.sqrt()).abs() < 1e-14);
        assert!(ProdBinLowerBoundInputs::new(2.0, 2.0, 5).is_err());
        let low = ProdBinLowerBoundInputs::new(4.0, 1.0, 5).unwrap();
        assert!(pb_lower_bound(&low).is_err());
    }

    #[test]
    fn triangles_three_vertices() {
        let p: f64 = 0.3;
        let p3 = p.powi(3);
        let k = 1;
        let b = triangles_bound(3, p, k).unwrap();
        let c1 = stein_factors(p3, k).unwrap().c1;
        assert!((b.total - c1 * p3 * p3).abs() < 1e-17);
    }

    #[test]
    fn occupancy_plug_in() {
        let (n, l) = (5u64, 7u64);
        let mu = 5.0 * 0.8f64.powi(7);
        let k = 2;
        let b = occupancy_bound(n, l, k).unwrap();
        let c1 = stein_factors(mu, k).unwrap().c1;
        let want = c1 * mu * (mu - 4.0 * 0.75f64.powi(7));
        assert!((b.total - want).abs() < 1e-14 * want);
    }

    #[test]
    fn two_runs_shifted_pieces() {
        assert!(two_runs_shift(100, 0.6) <= 0);
        assert!(two_runs_bound_shifted(8, 0.2, 5).is_err());
        assert!(two_runs_bound_shifted(20, 0.7, 5).is_err());
        let b = two_runs_bound_shifted(50, 0.2, 6).unwrap();
        assert!(b.total.is_finite() && b.total > 0.0);
        assert!(b.query.lambda >= 2.0);
        assert!(b.term(MAIN_C2_TERM).unwrap() > 0.0);
    }

    #[test]
    fn records_bound_monotone_in_n() {
        let b = records_bound(1000, 14).unwrap();
        assert!(b.is_finite() && b > 0.0);
        for x in [1.0, 2.5, 4.0] {
            let v: Vec<f64> = [10u64, 100, 1000, 100_000].iter().map(|&n| records_bound_at(n, x).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[1] < w[0]));
        }
        assert!(records_bound(2, 2).is_err());
    }
}
