//! Binomial tails against plain and adjusted Poisson tails.

use stein_md::oracles::binomial_log_sf;
use stein_md::special::{log_poisson_sf, log_std_normal_sf};
use stein_md::Execution;

use super::Outcome;
use crate::error::{config, CliResult};
use crate::grid::echo_list;
use crate::report::CsvReport;

pub const DEFAULT_EXAMPLE2_GRID: [u64; 5] = [10, 100, 1000, 10_000, 100_000];

#[derive(Debug, Clone, PartialEq)]
pub struct Example2Config {
    pub n_grid: Vec<u64>,
    pub p: f64,
    pub x: f64,
}

impl Default for Example2Config {
    fn default() -> Self {
        Example2Config { n_grid: DEFAULT_EXAMPLE2_GRID.to_vec(), p: 0.3, x: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2Row {
    pub n: u64,
    /// `ceil(np + x sqrt(np(1-p)))`
    pub k: i64,
    /// `ceil(np + x sqrt(np))`
    pub k_adjusted: i64,
    /// `ceil(np(1-p) + x sqrt(np(1-p)))`
    pub k_shifted: i64,
    pub ln_binomial_tail: f64,
    /// against `Pn(np)` at `k`
    pub ratio_plain: f64,
    /// against `Pn(np)` at `k_adjusted`
    pub ratio_adjusted: f64,
    /// against `Pn(np(1-p))` at `k_shifted`
    pub ratio_shifted: f64,
    /// `P(Z >= x) / P(Z >= x sqrt(1-p))`, the limit of `ratio_plain`
    pub limit_plain: f64,
    pub flagged: bool,
}

pub fn example2(cfg: &Example2Config, exec: Execution) -> CliResult<Vec<Example2Row>> {
    let (p, x) = (cfg.p, cfg.x);
    if !(p > 0.0 && p < 1.0) {
        return Err(config(format!("p must lie in (0, 1), got {p}")));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(config(format!("x must be positive, got {x}")));
    }
    if cfg.n_grid.is_empty() || cfg.n_grid.contains(&0) {
        return Err(config("n grid must be non-empty and positive"));
    }
    let q = 1.0 - p;
    let limit = (log_std_normal_sf(x).ln() - log_std_normal_sf(x * q.sqrt()).ln()).exp();
    let mut rows = exec
        .map_slice(&cfg.n_grid, |&n| -> CliResult<Example2Row> {
            let np = n as f64 * p;
            let npq = np * q;
            let k = (np + x * npq.sqrt()).ceil() as i64;
            let k_adjusted = (np + x * np.sqrt()).ceil() as i64;
            let k_shifted = (npq + x * npq.sqrt()).ceil() as i64;
            let ln_tail = binomial_log_sf(n, p, k)?.ln();
            let flagged = ln_tail == f64::NEG_INFINITY;
            let ratio = |ln_ref: f64| if flagged { f64::NAN } else { (ln_tail - ln_ref).exp() };
            Ok(Example2Row {
                n,
                k,
                k_adjusted,
                k_shifted,
                ln_binomial_tail: ln_tail,
                ratio_plain: ratio(log_poisson_sf(np, k)?.ln()),
                ratio_adjusted: ratio(log_poisson_sf(np, k_adjusted)?.ln()),
                ratio_shifted: ratio(log_poisson_sf(npq, k_shifted)?.ln()),
                limit_plain: limit,
                flagged,
            })
        })
        .into_iter()
        .collect::<CliResult<Vec<_>>>()?;
    rows.sort_by_key(|r| r.n);
    Ok(rows)
}

pub fn run(cfg: &Example2Config, exec: Execution) -> CliResult<Outcome> {
    let rows = example2(cfg, exec)?;
    let mut r = CsvReport::new(
        "example2",
        vec![
            ("n", "trials"),
            ("k", "count"),
            ("k_adjusted", "count"),
            ("k_shifted", "count"),
            ("ln_binomial_tail", "nats"),
            ("ratio_plain", "dimensionless"),
            ("ratio_adjusted", "dimensionless"),
            ("ratio_shifted", "dimensionless"),
            ("limit_plain", "dimensionless"),
            ("flagged", "bool"),
        ],
        1,
    );
    r.echo("n_grid", echo_list(&cfg.n_grid));
    r.echo("p", cfg.p);
    r.echo("x", cfg.x);
    r.note("ratio_plain -> limit_plain; ratio_adjusted and ratio_shifted -> 1 as n grows");
    for x in &rows {
        r.push(vec![
            x.n.into(),
            x.k.into(),
            x.k_adjusted.into(),
            x.k_shifted.into(),
            x.ln_binomial_tail.into(),
            x.ratio_plain.into(),
            x.ratio_adjusted.into(),
            x.ratio_shifted.into(),
            x.limit_plain.into(),
            x.flagged.into(),
        ]);
    }
    Ok(Outcome::ok(r))
}
