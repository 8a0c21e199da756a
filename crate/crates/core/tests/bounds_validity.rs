mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stein_md::bounds::*;
use stein_md::oracles::{
    birthday_table_small, matching_table, occupancy_table, poisson_binomial_params, poisson_binomial_table,
    records_params, records_table, triangles_table_small, two_runs_params, two_runs_table, DistributionTable,
};
use stein_md::special::log_poisson_sf;
use stein_md::stein::stein_factors;

/// `P(W >= threshold) / P(Y >= k) - 1`, `Y ~ Pn(lambda)`, in the log domain.
fn ratio_minus_one(t: &DistributionTable, threshold: i64, lambda: f64, k: i64) -> f64 {
    (t.log_tail(threshold) - log_poisson_sf(lambda, k).unwrap().ln()).exp_m1()
}

fn assert_covers(b: &BoundBreakdown, t: &DistributionTable, what: &str) {
    let q = b.query;
    let err = ratio_minus_one(t, q.threshold(), q.lambda, q.k).abs();
    assert!(b.total * (1.0 + 1e-9) + 1e-12 >= err, "{what}: bound {} < error {err}", b.total);
}

fn random_pb(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.random_range(1..=500);
    let hi: f64 = rng.random_range(0.01..0.9);
    (0..n).map(|_| rng.random_range(1e-4..hi)).collect()
}

#[test]
fn corollary_is_the_local_dependence_bound_with_z_equal_x() {
    let p = [0.1, 0.3, 0.05, 0.6];
    let summands: Vec<Corollary1Summand> = p
        .iter()
        .map(|&pi| Corollary1Summand {
            theta: 0.7,
            mu: pi,
            e_x_centered_x: pi * (1.0 - pi),
            e_abs_falling: 0.0,
        })
        .collect();
    let as_t1: Vec<Theorem1Summand> = summands.iter().map(|s| s.as_theorem1()).collect();
    assert!(rel(corollary1_sum_term(&summands), theorem1_sum_term(&as_t1)) < 1e-15);

    // a summand with X in {0, 1, 2}
    let (p1, p2) = (0.2, 0.1);
    let mu = p1 + 2.0 * p2;
    let ex2 = p1 + 4.0 * p2;
    let s = Corollary1Summand {
        theta: 1.0,
        mu,
        e_x_centered_x: ex2 - mu * mu,
        e_abs_falling: p2 * 2.0 * (2.0 - mu),
    };
    // E[|X - mu| X (X - X/2 - 1/2)] = E[|X - mu| X (X - 1)] / 2
    let direct = Theorem1Summand { theta: 1.0, e_centered_x_z: ex2 - mu * mu, e_z_prime: mu, e_abs_mixed: p2 * (2.0 - mu) * 2.0 * 0.5 };
    assert!(rel(corollary1_sum_term(&[s]), theorem1_sum_term(&[direct])) < 1e-15);

    let q = TailShiftQuery::new(1.3, 0, 3).unwrap();
    let a = corollary1_bound(&[s], &q, 1.0, 0.0).unwrap();
    let b = theorem1_bound(
        &Theorem1Ingredients { sum_term: theorem1_sum_term(&[direct]), abs_lambda_minus_sigma2: 0.3, left_tail: 0.0 },
        &q,
    )
    .unwrap();
    assert!(rel(a.total, b.total) < 1e-14);
}

#[test]
fn zero_bias_main_term_reproduces_the_shifted_pb_main_term() {
    let p: Vec<f64> = (0..40).map(|i| 0.05 + 0.02 * i as f64).collect();
    let m = poisson_binomial_params(&p).unwrap();
    let k = (m.mu - pb_shift(&p).unwrap() as f64).floor() as i64 + 3;
    let shifted = pb_bound_shifted(&p, k).unwrap();
    let theta = pb_theta(&p);
    let e_r = theta * p.iter().map(|x| x * x * (1.0 - x)).sum::<f64>() / m.sigma2;
    let z = theorem2_bound(m.sigma2, e_r, &shifted.query, 0.0).unwrap();
    assert!(rel(z.term(MAIN_C2_TERM).unwrap(), shifted.term(MAIN_C2_TERM).unwrap()) < 1e-13);
    // the middle terms differ by the factor 1/lambda
    let lam = shifted.query.lambda;
    let c1 = shifted.factors.c1;
    assert!(rel(shifted.term(C1_LAMBDA_SIGMA_TERM).unwrap(), c1 * (lam - m.sigma2).abs()) < 1e-13);
    assert!(rel(z.term(C1_LAMBDA_SIGMA_TERM).unwrap(), c1 * (lam - m.sigma2).abs() / lam) < 1e-13);
}

#[test]
fn exponential_left_tail_dominates_the_exact_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.random_range(5..400);
        let p: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..0.98)).collect();
        let m = poisson_binomial_params(&p).unwrap();
        let t = poisson_binomial_table(&p).unwrap();
        let d = m.mu - m.sigma2;
        for a in [d.floor() as i64, d.ceil() as i64] {
            if a <= 0 || a as f64 >= m.mu {
                continue;
            }
            let bound = left_tail_bound(m.mu, a, kahan(p.iter().copied())).unwrap();
            let exact = t.cdf(a - 2);
            assert!(bound >= exact, "n={n} a={a}: {bound} < {exact}");
            checked += 1;
        }
    }
    assert!(left_tail_exact_zero(0) && !left_tail_exact_zero(1));
}

#[test]
fn poisson_binomial_bounds_cover_the_exact_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let p = random_pb(&mut rng);
        let m = poisson_binomial_params(&p).unwrap();
        let t = poisson_binomial_table(&p).unwrap();
        let off = rng.random_range(1..12);
        let k = m.mu.floor() as i64 + off;
        let b = pb_bound_a0(&p, k).unwrap();
        assert_covers(&b, &t, &format!("a0 case {case}"));
        let a = pb_shift(&p).unwrap();
        let ks = (m.mu - a as f64).floor() as i64 + off;
        let b = pb_bound_shifted(&p, ks).unwrap();
        assert_eq!(b.query.a, a);
        assert_covers(&b, &t, &format!("shifted case {case}"));
    }
}

#[test]
fn one_sided_pb_bracket_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 100 {
        let p = random_pb(&mut rng);
        let m = poisson_binomial_params(&p).unwrap();
        let x: f64 = rng.random_range(1.0..4.0);
        let k = (m.mu + x * m.mu.sqrt()).ceil() as i64;
        // the upper side needs k >= mu + 1
        if (k as f64) < m.mu + 1.0 {
            continue;
        }
        let inp = ProdBinLowerBoundInputs::from_probs(&p, k).unwrap();
        let (lo, hi) = pb_lower_bound(&inp).unwrap();
        let t = poisson_binomial_table(&p).unwrap();
        let r = ratio_minus_one(&t, k, m.mu, k);
        assert!(lo <= r && r <= hi + 1e-12, "n={} k={k}: {lo} <= {r} <= {hi}", p.len());
        checked += 1;
    }
}

#[test]
fn upper_side_fails_below_mu_plus_one() {
    // P(W >= 1) = 1 - prod(1 - p_i) exceeds 1 - e^-mu
    let p = [0.3, 0.2];
    let t = poisson_binomial_table(&p).unwrap();
    let m = poisson_binomial_params(&p).unwrap();
    assert!(ratio_minus_one(&t, 1, m.mu, 1) > 0.0);
}

#[test]
fn records_bracket_holds() {
    for n in [100u64, 1000, 10_000] {
        let t = records_table(n).unwrap();
        let lam = records_params(n).unwrap().mu;
        for x in [1.0, 1.5, 2.0, 3.0, 4.0] {
            let k = (lam + x * lam.sqrt()).ceil() as i64;
            if (k as f64) < lam + 1.0 {
                continue;
            }
            let r = ratio_minus_one(&t, k, lam, k);
            let b = records_bound(n, k).unwrap();
            assert!(-b <= r && r <= 1e-12, "n={n} k={k}: -{b} <= {r}");
            // the records bound is the general one with worse constants
            let p: Vec<f64> = (2..=n).map(|i| 1.0 / i as f64).collect();
            let (lo, _) = pb_lower_bound(&ProdBinLowerBoundInputs::from_probs(&p, k).unwrap()).unwrap();
            assert!(lo <= r, "n={n} k={k}");
        }
    }
}

#[test]
fn matching_bound_covers_exact_error() {
    for n in 5..=12u64 {
        let t = matching_table(n).unwrap();
        for k in 2..=6i64 {
            let b = matching_bound(n, k).unwrap();
            assert!(rel(b.total, 2.0 / n as f64 * stein_factors(1.0, k).unwrap().c1) < 1e-15);
            assert_covers(&b, &t, &format!("matching n={n} k={k}"));
        }
    }
}

#[test]
fn occupancy_and_birthday_bounds_cover_exact_error() {
    for n in 2..=6u64 {
        for l in 1..=8u64 {
            let t = occupancy_table(n, l).unwrap();
            let mu = t.mean();
            if mu <= 0.0 {
                continue;
            }
            for k in (mu.floor() as i64 + 1)..=(n as i64) {
                if let Ok(b) = occupancy_bound(n, l, k) {
                    assert_covers(&b, &t, &format!("occupancy n={n} l={l} k={k}"));
                }
            }
        }
    }
    for (n, l) in [(10u64, 4u64), (20, 4), (100, 3), (30, 4), (6, 7)] {
        let t = birthday_table_small(n, l).unwrap();
        let mu = t.mean();
        for k in (mu.floor() as i64 + 1)..=(mu.floor() as i64 + 5) {
            let b = birthday_bound(n, l, k).unwrap();
            assert_covers(&b, &t, &format!("birthday n={n} l={l} k={k}"));
        }
    }
}

#[test]
fn triangle_bound_covers_exact_error() {
    for n in 3..=6u64 {
        for p in [0.05, 0.1, 0.3, 0.5] {
            let t = triangles_table_small(n, p).unwrap();
            let mu = t.mean();
            for k in (mu.floor() as i64 + 1)..=(mu.floor() as i64 + 4) {
                let b = triangles_bound(n, p, k).unwrap();
                assert_covers(&b, &t, &format!("triangles n={n} p={p} k={k}"));
            }
        }
    }
}

#[test]
fn two_runs_bounds_cover_exact_error() {
    for n in [20u64, 50, 100] {
        for p in [0.02, 0.05, 0.1, 0.2, 0.3] {
            let t = two_runs_table(n, p).unwrap();
            let mu = two_runs_params(n, p).unwrap().mu;
            for off in 1..=6 {
                let b = two_runs_bound_a0(n, p, mu.floor() as i64 + off).unwrap();
                assert_covers(&b, &t, &format!("2-runs a0 n={n} p={p} off={off}"));
                let (q, _) = two_runs_theorem1_ingredients(n, p).unwrap();
                let b = two_runs_bound_shifted(n, p, q.lambda.floor() as i64 + off).unwrap();
                assert!(b.query.a <= 0);
                assert_covers(&b, &t, &format!("2-runs shifted n={n} p={p} off={off}"));
            }
        }
    }
}

#[test]
fn bound_terms_add_up() {
    let b = pb_bound_shifted(&[0.4; 30], 10).unwrap();
    let s: f64 = b.terms.iter().map(|&(_, v)| v).sum();
    assert_eq!(s, b.total);
    assert!(b.term(LEFT_TAIL_TERM).is_some());
    assert!(b.term(C1_MU_TERM).is_none());
}

#[test]
fn preconditions_are_reported() {
    assert!(TailShiftQuery::new(3.0, 0, 3).is_err());
    assert!(TailShiftQuery::new(3.0, 1, 2).is_err());
    assert!(TailShiftQuery::with_lambda(0, -1.0, 2).is_err());
    assert!(pb_lower_bound(&ProdBinLowerBoundInputs::new(4.0, 1.0, 5).unwrap()).is_err());
    assert!(ProdBinLowerBoundInputs::new(2.0, 2.0, 6).is_err());
    assert!(records_bound(2, 2).is_err());
    assert!(size_bias_e_abs(CouplingKind::NegativelyRelated, 1.0, 2.0, 0.0).is_err());
    assert!(two_runs_theorem1_ingredients(8, 0.1).is_err());
    assert!(two_runs_theorem1_ingredients(20, 0.7).is_err());
}
