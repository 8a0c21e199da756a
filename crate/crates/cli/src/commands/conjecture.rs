//! Scan of the gap `c1_minus - c1_plus`. Reports only; never fails on the data.

use stein_md::stein::{conjecture_scan, ln_gap_increasing, ConjectureRow};
use stein_md::Execution;

use super::Outcome;
use crate::error::{config, CliResult};
use crate::grid::echo_list;
use crate::report::CsvReport;

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureConfig {
    pub lambdas: Vec<f64>,
    pub k_max_offset: u64,
}

impl Default for ConjectureConfig {
    fn default() -> Self {
        ConjectureConfig { lambdas: vec![1.0, 5.0, 10.0], k_max_offset: 30 }
    }
}

/// Per-lambda summary of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSummary {
    pub lambda: f64,
    pub all_positive: bool,
    pub ln_gap_increasing: bool,
}

pub fn summarize(rows: &[ConjectureRow], lambdas: &[f64]) -> Vec<GapSummary> {
    lambdas
        .iter()
        .map(|&lambda| {
            let block: Vec<ConjectureRow> = rows.iter().filter(|r| r.lambda == lambda).copied().collect();
            GapSummary {
                lambda,
                all_positive: block.iter().all(|r| !r.flagged),
                ln_gap_increasing: ln_gap_increasing(&block),
            }
        })
        .collect()
}

pub fn scan(cfg: &ConjectureConfig, exec: Execution) -> CliResult<Vec<ConjectureRow>> {
    if cfg.lambdas.is_empty() || cfg.lambdas.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
        return Err(config("lambdas must be a non-empty list of positive numbers"));
    }
    if cfg.k_max_offset == 0 {
        return Err(config("k_max_offset must be at least 1"));
    }
    Ok(conjecture_scan(&cfg.lambdas, cfg.k_max_offset, exec)?)
}

pub fn run(cfg: &ConjectureConfig, exec: Execution) -> CliResult<Outcome> {
    let rows = scan(cfg, exec)?;
    let mut r = CsvReport::new(
        "conjecture",
        vec![
            ("lambda", "count"),
            ("k", "count"),
            ("c1_minus", "dimensionless"),
            ("c1_plus", "dimensionless"),
            ("gap", "dimensionless"),
            ("ln_gap", "nats"),
            ("flagged", "bool"),
        ],
        2,
    );
    r.echo("lambdas", echo_list(&cfg.lambdas));
    r.echo("k_max_offset", cfg.k_max_offset);
    r.note("k runs over floor(lambda)+1 ..= floor(lambda)+k_max_offset; flagged rows have gap <= 0");
    for s in summarize(&rows, &cfg.lambdas) {
        r.note(format!(
            "lambda={}: all_gaps_positive={} ln_gap_increasing={}",
            s.lambda, s.all_positive, s.ln_gap_increasing
        ));
    }
    for x in &rows {
        r.push(vec![
            x.lambda.into(),
            (x.k as i64).into(),
            x.c1_minus.into(),
            x.c1_plus.into(),
            x.gap.into(),
            x.ln_gap.into(),
            x.flagged.into(),
        ]);
    }
    Ok(Outcome::ok(r))
}
