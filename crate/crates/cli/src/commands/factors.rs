//! Stein factors at a single `(lambda, k)`, cross-checked against the
//! directly solved Stein equation.

use stein_md::stein::{default_i_max, verify_lemma_properties, LemmaReport};

use super::Outcome;
use crate::error::{CliError, CliResult};
use crate::report::CsvReport;

pub fn lemma_report(lambda: f64, k: i64) -> CliResult<LemmaReport> {
    if k < 1 {
        return Err(CliError::Config(format!("k must be a positive integer, got {k}")));
    }
    Ok(verify_lemma_properties(lambda, k, default_i_max(lambda, k as u64))?)
}

pub fn run(lambda: f64, k: i64) -> CliResult<Outcome> {
    let rep = lemma_report(lambda, k)?;
    let f = rep.factors;
    let (ratio1, ratio2) = f.naive_ratios();
    let mut r = CsvReport::new(
        "stein-factors",
        vec![
            ("lambda", "count"),
            ("k", "count"),
            ("c0", "dimensionless"),
            ("c1_minus", "dimensionless"),
            ("c1_plus", "dimensionless"),
            ("c1", "dimensionless"),
            ("c2", "dimensionless"),
            ("naive", "dimensionless"),
            ("ratio1", "dimensionless"),
            ("ratio2", "dimensionless"),
            ("route_disagreement", "relative"),
            ("lemma_checks_passed", "bool"),
        ],
        2,
    );
    r.echo("lambda", lambda);
    r.echo("k", k);
    r.echo("i_max", rep.solution.i_max);
    r.note("every constant is divided by P(Y >= k)");
    for c in &rep.checks {
        r.note(format!("check {}: {} ({})", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail));
    }
    r.push(vec![
        f.lambda.into(),
        (f.k as i64).into(),
        f.c0.into(),
        f.c1_minus.into(),
        f.c1_plus.into(),
        f.c1.into(),
        f.c2.into(),
        f.naive.into(),
        ratio1.into(),
        ratio2.into(),
        rep.solution.max_rel_disagreement.into(),
        rep.all_passed().into(),
    ]);
    let failure = (!rep.all_passed()).then(|| {
        let names: Vec<&str> = rep.failures().map(|c| c.name).collect();
        CliError::Validation(format!("lemma checks failed: {}", names.join(", ")))
    });
    Ok(Outcome { report: r, failure })
}
