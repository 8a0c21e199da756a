//! Stein factors relative to the naive total-variation factor.

use stein_md::special::log_poisson_sf;
use stein_md::stein::stein_factors;
use stein_md::Execution;

use super::Outcome;
use crate::error::{config, CliError, CliResult};
use crate::report::CsvReport;

#[derive(Debug, Clone, PartialEq)]
pub struct Figure5Config {
    pub lambda: f64,
    pub k_range: Vec<i64>,
}

impl Default for Figure5Config {
    fn default() -> Self {
        Figure5Config { lambda: 10.0, k_range: (11..=43).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure5Row {
    pub k: i64,
    pub ln_poisson_tail: f64,
    pub c1: f64,
    pub c2: f64,
    pub naive: f64,
    /// `C1 / naive`
    pub ratio1: f64,
    /// `C2 / naive`
    pub ratio2: f64,
}

pub fn figure5(cfg: &Figure5Config, exec: Execution) -> CliResult<Vec<Figure5Row>> {
    if cfg.k_range.is_empty() {
        return Err(config("empty k range"));
    }
    if let Some(&k) = cfg.k_range.iter().find(|&&k| (k as f64) <= cfg.lambda) {
        return Err(config(format!("k must exceed lambda = {}, got {k}", cfg.lambda)));
    }
    let mut rows = exec
        .map_slice(&cfg.k_range, |&k| -> CliResult<Figure5Row> {
            let s = stein_factors(cfg.lambda, k)?;
            let (ratio1, ratio2) = s.naive_ratios();
            Ok(Figure5Row {
                k,
                ln_poisson_tail: log_poisson_sf(cfg.lambda, k)?.ln(),
                c1: s.c1,
                c2: s.c2,
                naive: s.naive,
                ratio1,
                ratio2,
            })
        })
        .into_iter()
        .collect::<CliResult<Vec<_>>>()?;
    rows.sort_by_key(|r| r.k);
    Ok(rows)
}

/// Names the first `k` where a ratio is not below one.
pub fn check_below_one(rows: &[Figure5Row]) -> Option<CliError> {
    rows.iter().find(|r| !(r.ratio1 < 1.0 && r.ratio2 < 1.0)).map(|r| {
        CliError::Validation(format!(
            "ratio_below_one failed at k={}: ratio1={}, ratio2={}",
            r.k, r.ratio1, r.ratio2
        ))
    })
}

pub fn run(cfg: &Figure5Config, exec: Execution) -> CliResult<Outcome> {
    let rows = figure5(cfg, exec)?;
    let mut r = CsvReport::new(
        "figure5",
        vec![
            ("k", "count"),
            ("ln_poisson_tail", "nats"),
            ("c1", "dimensionless"),
            ("c2", "dimensionless"),
            ("naive", "dimensionless"),
            ("ratio1", "dimensionless"),
            ("ratio2", "dimensionless"),
        ],
        1,
    );
    r.echo("lambda", cfg.lambda);
    r.echo("k", crate::grid::echo_list(&cfg.k_range));
    r.note("ratio_i = C_i(lambda, k) / ((1 - e^-lambda) / (lambda P(Y >= k)))");
    for x in &rows {
        r.push(vec![x.k.into(), x.ln_poisson_tail.into(), x.c1.into(), x.c2.into(), x.naive.into(), x.ratio1.into(), x.ratio2.into()]);
    }
    Ok(Outcome { report: r, failure: check_below_one(&rows) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_range_passes() {
        let rows = figure5(&Figure5Config::default(), Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 33);
        assert!(check_below_one(&rows).is_none());
        assert!(rows.iter().all(|r| r.ratio2 >= r.ratio1));
        // P(Y >= 43) is about 1e-14
        let t = rows.last().unwrap().ln_poisson_tail / std::f64::consts::LN_10;
        assert!((-14.5..-13.5).contains(&t), "{t}");
    }

    #[test]
    fn k_must_exceed_lambda() {
        let cfg = Figure5Config { lambda: 10.0, k_range: vec![10, 11] };
        assert!(matches!(figure5(&cfg, Execution::Sequential), Err(CliError::Config(_))));
    }
}
