//! Tail ratios for the number of records, against four comparators.

use stein_md::bounds::records_bound;
use stein_md::oracles::{records_params, records_table, TailBracket};
use stein_md::special::{log_poisson_sf, log_std_normal_sf};
use stein_md::Execution;

use super::Outcome;
use crate::error::{config, CliError, CliResult};
use crate::grid::echo_list;
use crate::report::{Cell, CsvReport};

pub const DEFAULT_RECORDS_GRID: [u64; 11] =
    [3, 5, 10, 30, 100, 300, 1000, 3000, 10_000, 30_000, 100_000];
pub const RECORDS_MAX_N: u64 = 100_000;
/// Largest tolerated mass outside the table window, relative to the tail.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RecordsConfig {
    pub n_grid: Vec<u64>,
    pub x: f64,
}

impl Default for RecordsConfig {
    fn default() -> Self {
        RecordsConfig { n_grid: DEFAULT_RECORDS_GRID.to_vec(), x: 3.0 }
    }
}

/// Exact tail of the records count at `k = ceil(v_n)`, `v_n = lambda_n +
/// x sigma_n`, and its ratios to each comparator tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioCurvePoint {
    pub n: u64,
    pub lambda_n: f64,
    pub sigma2_n: f64,
    pub v_n: f64,
    pub k: i64,
    pub exact_tail: TailBracket,
    pub ln_exact_tail: f64,
    /// against `Pn(lambda_n)` at `k`
    pub ratio_pn_lambda: f64,
    /// against `N(lambda_n, sigma_n^2)` at `v_n`
    pub ratio_normal: f64,
    /// against `N(lambda_n, sigma_n^2)` at `k - 1/2`
    pub ratio_normal_corrected: f64,
    /// against `Pn(sigma_n^2)` at `k`
    pub ratio_pn_sigma2: f64,
    /// `ratio_pn_lambda - 1 >= -records_lower_bound`, when defined
    pub records_lower_bound: Option<f64>,
    /// The exact tail is zero, so no ratio is defined.
    pub flagged: bool,
}

fn point(n: u64, x: f64) -> CliResult<RatioCurvePoint> {
    let m = records_params(n)?;
    let (lambda, sigma2) = (m.mu, m.sigma2);
    let sigma = sigma2.sqrt();
    let v = lambda + x * sigma;
    let k = v.ceil() as i64;
    let table = records_table(n)?;
    let bracket = table.tail_bracket(k);
    let ln_tail = table.log_tail(k);
    let flagged = ln_tail == f64::NEG_INFINITY;
    if !flagged && table.truncated_mass > TRUNCATION_TOLERANCE * ln_tail.exp() {
        return Err(CliError::Accuracy(format!(
            "records n={n}: truncated mass {:e} exceeds {TRUNCATION_TOLERANCE:e} of the tail {:e}",
            table.truncated_mass,
            ln_tail.exp()
        )));
    }
    let ratio = |ln_ref: f64| if flagged { f64::NAN } else { (ln_tail - ln_ref).exp() };
    Ok(RatioCurvePoint {
        n,
        lambda_n: lambda,
        sigma2_n: sigma2,
        v_n: v,
        k,
        exact_tail: bracket,
        ln_exact_tail: ln_tail,
        ratio_pn_lambda: ratio(log_poisson_sf(lambda, k)?.ln()),
        ratio_normal: ratio(log_std_normal_sf((v - lambda) / sigma).ln()),
        ratio_normal_corrected: ratio(log_std_normal_sf((k as f64 - 0.5 - lambda) / sigma).ln()),
        ratio_pn_sigma2: ratio(log_poisson_sf(sigma2, k)?.ln()),
        records_lower_bound: records_bound(n, k).ok(),
        flagged,
    })
}

pub fn records_figures(cfg: &RecordsConfig, exec: Execution) -> CliResult<Vec<RatioCurvePoint>> {
    if !(cfg.x.is_finite() && cfg.x > 0.0) {
        return Err(config(format!("x must be positive, got {}", cfg.x)));
    }
    if cfg.n_grid.is_empty() {
        return Err(config("empty n grid"));
    }
    if let Some(&n) = cfg.n_grid.iter().find(|&&n| !(3..=RECORDS_MAX_N).contains(&n)) {
        return Err(config(format!("records n must lie in [3, {RECORDS_MAX_N}], got {n}")));
    }
    let mut pts = exec.map_slice(&cfg.n_grid, |&n| point(n, cfg.x)).into_iter().collect::<CliResult<Vec<_>>>()?;
    pts.sort_by_key(|p| p.n);
    Ok(pts)
}

pub fn records_report(cfg: &RecordsConfig, pts: &[RatioCurvePoint]) -> CsvReport {
    let mut r = CsvReport::new(
        "records-figures",
        vec![
            ("n", "observations"),
            ("lambda_n", "count"),
            ("sigma2_n", "count^2"),
            ("v_n", "count"),
            ("k", "count"),
            ("exact_tail_lo", "probability"),
            ("exact_tail_hi", "probability"),
            ("ln_exact_tail", "nats"),
            ("ratio_pn_lambda", "dimensionless"),
            ("ratio_normal", "dimensionless"),
            ("ratio_normal_corrected", "dimensionless"),
            ("ratio_pn_sigma2", "dimensionless"),
            ("records_lower_bound", "dimensionless"),
            ("flagged", "bool"),
        ],
        1,
    );
    r.echo("n_grid", echo_list(&cfg.n_grid));
    r.echo("x", cfg.x);
    r.note("k = ceil(v_n); the uncorrected normal comparator is evaluated at v_n itself");
    r.note("flagged rows have a zero exact tail and undefined ratios");
    for p in pts {
        r.push(vec![
            p.n.into(),
            p.lambda_n.into(),
            p.sigma2_n.into(),
            p.v_n.into(),
            p.k.into(),
            p.exact_tail.lo.into(),
            p.exact_tail.hi.into(),
            p.ln_exact_tail.into(),
            p.ratio_pn_lambda.into(),
            p.ratio_normal.into(),
            p.ratio_normal_corrected.into(),
            p.ratio_pn_sigma2.into(),
            Cell::from(p.records_lower_bound),
            p.flagged.into(),
        ]);
    }
    r
}

pub fn run(cfg: &RecordsConfig, exec: Execution) -> CliResult<Outcome> {
    let pts = records_figures(cfg, exec)?;
    Ok(Outcome::ok(records_report(cfg, &pts)))
}
