mod common;

use common::*;
use proptest::prelude::*;
use stein_md::special::log_poisson_sf;
use stein_md::stein::{
    conjecture_scan, default_i_max, solve_stein_equation, stein_factors, verify_lemma_properties,
};
use stein_md::Execution;

/// lambda as sixteenths, so the oracle sees the exact same value
const LAMBDA_16THS: [i64; 5] = [8, 16, 80, 160, 400];

#[test]
fn factors_match_exact_rationals() {
    for m in LAMBDA_16THS {
        let lam = rat(m, 16);
        let lf = m as f64 / 16.0;
        for off in 1..=30u64 {
            let k = lf.floor() as u64 + off;
            let (c0, c1m, c1p) = stein_constants(&lam, k);
            let (c0, c1m, c1p) = (to_f64(&c0), to_f64(&c1m), to_f64(&c1p));
            let s = stein_factors(lf, k as i64).unwrap();
            assert!(rel(s.c0, c0) < 1e-10, "c0 lambda={lf} k={k}: {} vs {c0}", s.c0);
            assert!(rel(s.c1_minus, c1m) < 1e-10, "c1- lambda={lf} k={k}: {} vs {c1m}", s.c1_minus);
            assert!(rel(s.c1_plus, c1p) < 1e-10, "c1+ lambda={lf} k={k}: {} vs {c1p}", s.c1_plus);
            assert!(rel(s.c1, c1m.max(c1p)) < 1e-10);
            assert!(rel(s.c2, c1m + c1p) < 1e-10);
        }
    }
}

#[test]
fn frozen_values_at_lambda_one() {
    // from the rational oracle, 22 digits
    let s = stein_factors(1.0, 2).unwrap();
    assert!(rel(s.c0, 2.0) < 1e-15);
    assert!(rel(s.c1_minus, 1.0) < 1e-15);
    assert!(rel(s.c1_plus, 0.784_422_382_354_665_628_753_1) < 1e-14);
    let s = stein_factors(1.0, 3).unwrap();
    assert!(rel(s.c0, 5.0) < 1e-15);
    assert!(rel(s.c1_minus, 3.0) < 1e-15);
    assert!(rel(s.c1, 3.0) < 1e-15);
    assert!(rel(s.c1_plus, 1.453_083_463_926_812_110_538) < 1e-14);

    let (_, c1m, c1p) = stein_constants(&rat(1, 1), 3);
    assert_eq!(c1m, rat(3, 1));
    assert!(rel(to_f64(&c1p), 1.453_083_463_926_812_110_538) < 1e-15);
}

#[test]
fn naive_factor_matches_oracle() {
    // (1 - e^-lambda) / (lambda P(Y >= k)) with lambda = 5, k = 12
    let lam = rat(5, 1);
    let tail = (-5.0f64).exp() * to_f64(&poisson_weight_tail(&lam, 12));
    let want = -(-5.0f64).exp_m1() / (5.0 * tail);
    let s = stein_factors(5.0, 12).unwrap();
    assert!(rel(s.naive, want) < 1e-12);
    assert!(s.c1 < s.naive);
}

#[test]
fn factor_preconditions() {
    assert!(stein_factors(2.0, 2).is_err());
    assert!(stein_factors(2.5, 2).is_err());
    assert!(stein_factors(0.5, 0).is_err());
    assert!(stein_factors(-1.0, 3).is_err());
    assert!(stein_factors(f64::INFINITY, 3).is_err());
    assert!(stein_factors(0.5, 1).is_ok());
}

#[test]
fn ratios_to_naive_factor_fall_below_one() {
    for k in 11..=43 {
        let s = stein_factors(10.0, k).unwrap();
        let (r1, r2) = s.naive_ratios();
        assert!(r1 < 1.0 && r2 < 1.0, "k={k}: {r1} {r2}");
    }
}

#[test]
fn solution_routes_agree_and_lemma_holds() {
    for &lam in &[0.5, 1.0, 5.0, 10.0, 25.0] {
        for off in [1u64, 2, 3, 5, 10, 20, 30] {
            let k = (lam as f64).floor() as u64 + off;
            let i_max = default_i_max(lam, k);
            let sol = solve_stein_equation(lam, k as i64, i_max).unwrap();
            assert!(sol.max_rel_disagreement < 1e-10, "lambda={lam} k={k}");
            let rep = verify_lemma_properties(lam, k as i64, i_max).unwrap();
            let bad: Vec<_> = rep.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
            assert!(bad.is_empty(), "lambda={lam} k={k}: {bad:?}");
        }
    }
}

#[test]
fn solution_satisfies_stein_identity() {
    // lambda f(j+1) - j f(j) = 1[j >= k] - P(Y >= k)
    let (lam, k) = (5.0, 9i64);
    let sol = solve_stein_equation(lam, k, default_i_max(lam, k as u64)).unwrap();
    let tail = log_poisson_sf(lam, k).unwrap().prob();
    for j in 1..sol.f.len() - 1 {
        let lhs = lam * sol.f[j + 1] - j as f64 * sol.f[j];
        let rhs = if j as i64 >= k { 1.0 } else { 0.0 } - tail;
        assert!((lhs - rhs).abs() < 1e-12, "j={j}: {lhs} vs {rhs}");
    }
}

#[test]
fn conjecture_gap_is_positive_and_ordered() {
    let rows = conjecture_scan(&[1.0, 5.0], 10, Execution::Sequential).unwrap();
    assert_eq!(rows.len(), 20);
    assert_eq!((rows[0].lambda, rows[0].k), (1.0, 2));
    assert!(rel(rows[0].gap, 0.215_577_617_645_334_371_2) < 1e-12);
    assert!(rel(rows[1].gap, 1.546_916_536_073_187_889) < 1e-12);
    assert!(rows.iter().all(|r| !r.flagged && r.gap > 0.0));
    let par = conjecture_scan(&[1.0, 5.0], 10, Execution::Parallel).unwrap();
    assert_eq!(rows, par);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factor_identities(lam in 0.05f64..60.0, off in 1i64..40) {
        let k = lam.floor() as i64 + off;
        let s = stein_factors(lam, k).unwrap();
        prop_assert!(s.c0 > 0.0 && s.c1_minus > 0.0 && s.c1_plus > 0.0);
        prop_assert_eq!(s.c1, s.c1_minus.max(s.c1_plus));
        prop_assert!((s.c2 - (s.c1_minus + s.c1_plus)).abs() <= 1e-15 * s.c2);
        prop_assert!(s.c1_minus <= s.c0 * (1.0 + 1e-12));
    }
}
