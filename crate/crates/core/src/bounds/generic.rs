use crate::error::{domain, precondition, Error, Result};
use crate::stein::{stein_factors, SteinFactorSet};

pub const MAIN_C2_TERM: &str = "main_c2_term";
pub const C1_LAMBDA_SIGMA_TERM: &str = "c1_lambda_sigma_term";
pub const LEFT_TAIL_TERM: &str = "left_tail_term";
pub const C1_MU_TERM: &str = "c1_mu_term";

/// The event `W - a >= k` compared against `Pn(lambda)`, `lambda = mu - a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailShiftQuery {
    pub a: i64,
    pub lambda: f64,
    pub k: i64,
}

impl TailShiftQuery {
    /// Builds the query from the mean; requires `a < mu` and `k > mu - a`.
    pub fn new(mu: f64, a: i64, k: i64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(domain(format!("mean must be finite, got {mu}")));
        }
        Self::with_lambda(a, mu - a as f64, k)
    }

    pub fn with_lambda(a: i64, lambda: f64, k: i64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(precondition(format!("shift a={a} must leave lambda = mu - a > 0, got {lambda}")));
        }
        if k < 1 || (k as f64) <= lambda {
            return Err(precondition(format!("need a positive integer k > lambda, got k={k}, lambda={lambda}")));
        }
        Ok(TailShiftQuery { a, lambda, k })
    }

    pub fn mu(&self) -> f64 {
        self.lambda + self.a as f64
    }

    /// The count threshold `a + k` in `P(W >= a + k)`.
    pub fn threshold(&self) -> i64 {
        self.a + self.k
    }
}

/// Scalar inputs of the local-dependence bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Ingredients {
    /// `sum_i theta_i { |E(X_i - mu_i) Z_i| E Z_i' + E[|X_i - mu_i| Z_i (Z_i' - Z_i/2 - 1/2)] }`.
    pub sum_term: f64,
    pub abs_lambda_minus_sigma2: f64,
    /// `P(W - a < -1)` or an upper bound for it.
    pub left_tail: f64,
}

/// Per-summand moments of the local-dependence bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Summand {
    pub theta: f64,
    /// `E[(X_i - mu_i) Z_i]` (sign irrelevant).
    pub e_centered_x_z: f64,
    /// `E Z_i'`.
    pub e_z_prime: f64,
    /// `E[|X_i - mu_i| Z_i (Z_i' - Z_i/2 - 1/2)]`.
    pub e_abs_mixed: f64,
}

/// Per-summand moments for independent non-negative integer summands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corollary1Summand {
    /// `max_j P(W - X_i = j)`, or an upper bound.
    pub theta: f64,
    pub mu: f64,
    /// `E[X_i (X_i - mu_i)]`.
    pub e_x_centered_x: f64,
    /// `E[|X_i - mu_i| X_i (X_i - 1)]`.
    pub e_abs_falling: f64,
}

impl Corollary1Summand {
    /// The same summand in local-dependence form with `Z_i = Z_i' = X_i`.
    pub fn as_theorem1(&self) -> Theorem1Summand {
        Theorem1Summand {
            theta: self.theta,
            e_centered_x_z: self.e_x_centered_x,
            e_z_prime: self.mu,
            e_abs_mixed: 0.5 * self.e_abs_falling,
        }
    }
}

pub fn theorem1_sum_term(summands: &[Theorem1Summand]) -> f64 {
    summands
        .iter()
        .map(|s| s.theta * (s.e_centered_x_z.abs() * s.e_z_prime + s.e_abs_mixed))
        .sum()
}

pub fn corollary1_sum_term(summands: &[Corollary1Summand]) -> f64 {
    summands
        .iter()
        .map(|s| s.theta * (s.mu * s.e_x_centered_x.abs() + 0.5 * s.e_abs_falling))
        .sum()
}

/// Itemized right-hand side of a bound on `|P(W-a >= k)/P(Y >= k) - 1|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundBreakdown {
    pub total: f64,
    pub terms: Vec<(&'static str, f64)>,
    pub query: TailShiftQuery,
    pub factors: SteinFactorSet,
}

impl BoundBreakdown {
    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }

    fn assemble(query: TailShiftQuery, factors: SteinFactorSet, terms: Vec<(&'static str, f64)>) -> Self {
        let total = terms.iter().map(|&(_, v)| v).sum();
        BoundBreakdown { total, terms, query, factors }
    }
}

/// `c * v`, with zero whenever `v` is zero (so an overflowed factor times an
/// absent term stays zero).
pub(crate) fn scaled(c: f64, v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        c * v
    }
}

fn non_negative(name: &str, x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!("{name} must be non-negative, got {x}")));
    }
    Ok(())
}

fn left_tail_ok(x: f64) -> Result<()> {
    non_negative("left tail", x)?;
    if x > 1.0 {
        return Err(domain(format!("left tail is a probability bound, got {x}")));
    }
    Ok(())
}

/// `C2 sum_term + C1 |lambda - sigma2| + left_tail`.
pub fn theorem1_bound(ing: &Theorem1Ingredients, q: &TailShiftQuery) -> Result<BoundBreakdown> {
    non_negative("sum term", ing.sum_term)?;
    non_negative("|lambda - sigma2|", ing.abs_lambda_minus_sigma2)?;
    left_tail_ok(ing.left_tail)?;
    let f = stein_factors(q.lambda, q.k)?;
    let terms = vec![
        (MAIN_C2_TERM, scaled(f.c2, ing.sum_term)),
        (C1_LAMBDA_SIGMA_TERM, scaled(f.c1, ing.abs_lambda_minus_sigma2)),
        (LEFT_TAIL_TERM, ing.left_tail),
    ];
    Ok(BoundBreakdown::assemble(*q, f, terms))
}

/// Independent summands:
/// `C2 sum theta_i {mu_i |E X_i(X_i - mu_i)| + E[|X_i - mu_i| X_i(X_i - 1)]/2}
///  + C1 |lambda - sigma2| + left_tail`.
pub fn corollary1_bound(
    per_summand: &[Corollary1Summand],
    q: &TailShiftQuery,
    sigma2: f64,
    left_tail: f64,
) -> Result<BoundBreakdown> {
    for s in per_summand {
        non_negative("theta", s.theta)?;
        non_negative("summand mean", s.mu)?;
        non_negative("E[|X - mu| X (X - 1)]", s.e_abs_falling)?;
    }
    non_negative("sigma2", sigma2)?;
    let ing = Theorem1Ingredients {
        sum_term: corollary1_sum_term(per_summand),
        abs_lambda_minus_sigma2: (q.lambda - sigma2).abs(),
        left_tail,
    };
    theorem1_bound(&ing, q)
}

/// `exp(-(mu - a + 2)^2 / (2 sum E X_i^2))`, an upper bound on
/// `P(W - a < -1)` for independent non-negative summands.
pub fn left_tail_bound(mu: f64, a: i64, sum_e_xi2: f64) -> Result<f64> {
    if !((a as f64) < mu) {
        return Err(precondition(format!("need a < mu, got a={a}, mu={mu}")));
    }
    if !(sum_e_xi2 > 0.0) {
        return Err(domain(format!("sum of second moments must be positive, got {sum_e_xi2}")));
    }
    let d = mu - a as f64 + 2.0;
    Ok((-d * d / (2.0 * sum_e_xi2)).exp())
}

/// `P(W - a < -1)` is exactly zero for a non-negative count when `a <= 0`.
pub fn left_tail_exact_zero(a: i64) -> bool {
    a <= 0
}

/// How a size-biased coupling was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    NegativelyRelated,
    PositivelyRelated,
    Custom,
}

/// `E|W + 1 - W^s|` for a size-biased coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeBiasSummary {
    pub e_abs: f64,
    pub coupling_kind: CouplingKind,
}

/// `E|W + 1 - W^s|` for monotone couplings of indicator sums:
/// `(mu - sigma2)/mu` when negatively related, and the upper bound
/// `(sigma2 - mu + 2 sum p_i^2)/mu` when positively related.
pub fn size_bias_e_abs(kind: CouplingKind, mu: f64, sigma2: f64, sum_pi2: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(domain(format!("mean must be positive, got {mu}")));
    }
    let v = match kind {
        CouplingKind::NegativelyRelated => (mu - sigma2) / mu,
        CouplingKind::PositivelyRelated => (sigma2 - mu + 2.0 * sum_pi2) / mu,
        CouplingKind::Custom => {
            return Err(precondition("a custom coupling has no closed form; supply e_abs directly"));
        }
    };
    // rounding in the inputs can leave a tiny negative residue
    let slack = 64.0 * f64::EPSILON * (mu.abs() + sigma2.abs() + sum_pi2.abs()) / mu;
    if v < -slack || v.is_nan() {
        return Err(Error::Consistency(format!(
            "E|W+1-W^s| came out negative ({v}); mean/variance inputs are inconsistent with the coupling"
        )));
    }
    Ok(v.max(0.0))
}

/// `C1(lambda, k) {mu E|W + 1 - W^s| + |mu - lambda|} + left_tail`.
pub fn theorem12_bound(mu: f64, size_bias: &SizeBiasSummary, q: &TailShiftQuery, left_tail: f64) -> Result<BoundBreakdown> {
    non_negative("mean", mu)?;
    non_negative("E|W+1-W^s|", size_bias.e_abs)?;
    left_tail_ok(left_tail)?;
    let f = stein_factors(q.lambda, q.k)?;
    let terms = vec![
        (C1_MU_TERM, scaled(f.c1, mu * size_bias.e_abs)),
        (C1_LAMBDA_SIGMA_TERM, scaled(f.c1, (mu - q.lambda).abs())),
        (LEFT_TAIL_TERM, left_tail),
    ];
    Ok(BoundBreakdown::assemble(*q, f, terms))
}

/// `C2 sigma2 E[|R| theta_R] + C1 |lambda - sigma2| / lambda + left_tail`.
/// The middle term carries `1/lambda` here, unlike [`theorem1_bound`].
pub fn theorem2_bound(sigma2: f64, e_abs_r_theta_r: f64, q: &TailShiftQuery, left_tail: f64) -> Result<BoundBreakdown> {
    non_negative("sigma2", sigma2)?;
    non_negative("E[|R| theta_R]", e_abs_r_theta_r)?;
    left_tail_ok(left_tail)?;
    let f = stein_factors(q.lambda, q.k)?;
    let terms = vec![
        (MAIN_C2_TERM, scaled(f.c2, sigma2 * e_abs_r_theta_r)),
        (C1_LAMBDA_SIGMA_TERM, scaled(f.c1, (q.lambda - sigma2).abs() / q.lambda)),
        (LEFT_TAIL_TERM, left_tail),
    ];
    Ok(BoundBreakdown::assemble(*q, f, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_ingredients_give_zero() {
        let q = TailShiftQuery::new(1.0, 0, 2).unwrap();
        let ing = Theorem1Ingredients { sum_term: 0.0, abs_lambda_minus_sigma2: 0.0, left_tail: 0.0 };
        assert_eq!(theorem1_bound(&ing, &q).unwrap().total, 0.0);
        let ing = Theorem1Ingredients { abs_lambda_minus_sigma2: 1.0, ..ing };
        let b = theorem1_bound(&ing, &q).unwrap();
        assert!((b.total - 1.0).abs() < 1e-15);
        assert_eq!(b.term(C1_LAMBDA_SIGMA_TERM), Some(b.total));
    }

    #[test]
    fn query_preconditions() {
        assert!(TailShiftQuery::new(3.0, 3, 1).is_err());
        assert!(TailShiftQuery::new(3.0, 0, 3).is_err());
        assert!(TailShiftQuery::new(3.0, -1, 5).is_ok());
        let q = TailShiftQuery::new(10.5, 2, 9).unwrap();
        assert_eq!(q.lambda, 8.5);
        assert_eq!(q.threshold(), 11);
    }

    #[test]
    fn left_tail_plug_in() {
        assert!((left_tail_bound(10.0, 0, 10.0).unwrap() - (-7.2f64).exp()).abs() < 1e-18);
        assert!(left_tail_bound(10.0, 10, 10.0).is_err());
        assert!(left_tail_exact_zero(0) && !left_tail_exact_zero(1));
    }

    #[test]
    fn size_bias_closed_forms() {
        // iid Bernoulli(p): (mu - sigma2)/mu = p
        let (n, p) = (30.0, 0.2);
        let e = size_bias_e_abs(CouplingKind::NegativelyRelated, n * p, n * p * (1.0 - p), 0.0).unwrap();
        assert!((e - p).abs() < 1e-15);
        assert!(size_bias_e_abs(CouplingKind::NegativelyRelated, 1.0, 2.0, 0.0).is_err());
        assert!(size_bias_e_abs(CouplingKind::Custom, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn theorem2_degenerate_and_scaling() {
        let q = TailShiftQuery::new(4.0, 0, 6).unwrap();
        let b = theorem2_bound(4.0, 0.0, &q, 0.125).unwrap();
        assert_eq!(b.total, 0.125);
        let b1 = theorem1_bound(
            &Theorem1Ingredients { sum_term: 0.0, abs_lambda_minus_sigma2: 2.0, left_tail: 0.0 },
            &q,
        )
        .unwrap();
        let b2 = theorem2_bound(2.0, 0.0, &q, 0.0).unwrap();
        assert!((b2.total * 4.0 - b1.total).abs() < 1e-14);
    }

    #[test]
    fn overflowed_factor_times_zero_is_zero() {
        assert_eq!(scaled(f64::INFINITY, 0.0), 0.0);
        assert_eq!(scaled(f64::INFINITY, 1e-300), f64::INFINITY);
    }
}
