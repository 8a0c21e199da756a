//! Bound-validity sweeps: every case compares the exact (or simulated)
//! relative tail error with the bound's total.

use stein_md::bounds::{
    birthday_bound, matching_bound, occupancy_bound, pb_bound_a0, pb_bound_shifted, pb_shift, triangles_bound,
    two_runs_bound_a0, two_runs_bound_shifted, two_runs_theorem1_ingredients, BoundBreakdown,
};
use stein_md::oracles::{monte_carlo_histogram, AppModel, DistributionTable, McHistogram};
use stein_md::special::log_poisson_sf;
use stein_md::{Error, Execution};

use super::Outcome;
use crate::error::{config, CliError, CliResult};
use crate::grid::GridSpec;
use crate::report::CsvReport;

/// Absolute slack allowed on exact comparisons.
pub const EXACT_SLACK: f64 = 1e-10;
/// Monte Carlo cases pass if `bound >= |ratio - 1| - MC_SIGMAS * stderr`.
pub const MC_SIGMAS: f64 = 4.0;
pub const DEFAULT_MC_SAMPLES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum App {
    Matching,
    Occupancy,
    Birthday,
    Triangles,
    TwoRuns,
    PoissonBinomial,
}

impl App {
    pub const ALL: [App; 6] =
        [App::Matching, App::Occupancy, App::Birthday, App::Triangles, App::TwoRuns, App::PoissonBinomial];

    pub fn name(self) -> &'static str {
        match self {
            App::Matching => "matching",
            App::Occupancy => "occupancy",
            App::Birthday => "birthday",
            App::Triangles => "triangles",
            App::TwoRuns => "two-runs",
            App::PoissonBinomial => "poisson-binomial",
        }
    }

    pub fn parse(s: &str) -> CliResult<App> {
        App::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let names: Vec<&str> = App::ALL.iter().map(|a| a.name()).collect();
            config(format!("unknown application '{s}' (expected one of: {})", names.join(", ")))
        })
    }

    /// Grid keys understood by this application.
    pub fn grid_keys(self) -> &'static [&'static str] {
        match self {
            App::Matching => &["n", "k"],
            App::Occupancy | App::Birthday => &["n", "l", "off"],
            App::Triangles | App::TwoRuns => &["n", "p", "off"],
            App::PoissonBinomial => &["n", "pmax", "off"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateConfig {
    pub app: App,
    pub grid: GridSpec,
    pub seed: u64,
    pub samples: u64,
}

impl ValidateConfig {
    pub fn new(app: App) -> Self {
        ValidateConfig { app, grid: GridSpec::default(), seed: crate::DEFAULT_SEED, samples: DEFAULT_MC_SAMPLES }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// The bound being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Matching,
    Occupancy,
    Birthday,
    Triangles,
    TwoRunsSizeBias,
    TwoRunsTranslated,
    PbSizeBias,
    PbTranslated,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Matching => "matching_size_bias",
            Variant::Occupancy => "occupancy_size_bias",
            Variant::Birthday => "birthday_size_bias",
            Variant::Triangles => "triangles_size_bias",
            Variant::TwoRunsSizeBias => "two_runs_size_bias",
            Variant::TwoRunsTranslated => "two_runs_translated",
            Variant::PbSizeBias => "pb_size_bias",
            Variant::PbTranslated => "pb_translated",
        }
    }

    fn of(app: App) -> &'static [Variant] {
        match app {
            App::Matching => &[Variant::Matching],
            App::Occupancy => &[Variant::Occupancy],
            App::Birthday => &[Variant::Birthday],
            App::Triangles => &[Variant::Triangles],
            App::TwoRuns => &[Variant::TwoRunsSizeBias, Variant::TwoRunsTranslated],
            App::PoissonBinomial => &[Variant::PbSizeBias, Variant::PbTranslated],
        }
    }
}

/// One validated `(instance, bound, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub variant: Variant,
    pub n: u64,
    /// `l`, `p` or `pmax` depending on the application; NaN for matching.
    pub param: f64,
    pub k: i64,
    pub a: i64,
    pub lambda: f64,
    pub method: Method,
    /// `P(W >= a + k)`, exact or estimated.
    pub tail: f64,
    pub tail_lo: f64,
    pub tail_hi: f64,
    pub tail_stderr: f64,
    /// `P(Y >= k)`, `Y ~ Pn(lambda)`.
    pub poisson_tail: f64,
    pub abs_ratio_minus_one: f64,
    pub ratio_stderr: f64,
    /// NaN when the bound is not applicable.
    pub bound: f64,
    /// `None` for flagged rows without a bound.
    pub passed: Option<bool>,
    pub flagged: bool,
    pub note: String,
}

struct Case {
    n: u64,
    param: f64,
    model: AppModel,
}

enum TailSource {
    Exact(DistributionTable),
    Simulated(McHistogram),
}

struct TailValue {
    tail: f64,
    ln_tail: f64,
    lo: f64,
    hi: f64,
    stderr: f64,
}

impl TailSource {
    fn method(&self) -> Method {
        match self {
            TailSource::Exact(_) => Method::Exact,
            TailSource::Simulated(_) => Method::MonteCarlo,
        }
    }

    fn at(&self, threshold: i64) -> TailValue {
        match self {
            TailSource::Exact(t) => {
                let b = t.tail_bracket(threshold);
                TailValue { tail: t.tail(threshold), ln_tail: t.log_tail(threshold), lo: b.lo, hi: b.hi, stderr: 0.0 }
            }
            TailSource::Simulated(h) => {
                let e = h.tail_estimate(threshold);
                TailValue { tail: e.p_hat, ln_tail: e.p_hat.ln(), lo: e.ci95_low, hi: e.ci95_high, stderr: e.stderr }
            }
        }
    }
}

/// Low-discrepancy success probabilities in `(0, pmax]`.
pub fn pb_probabilities(n: u64, pmax: f64) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_8;
    (1..=n).map(|i| (pmax * (i as f64 * GOLDEN).fract()).max(1e-6)).collect()
}

fn cases(app: App, g: &GridSpec) -> CliResult<(Vec<Case>, Vec<i64>)> {
    g.restrict(app.grid_keys())?;
    let mut out = Vec::new();
    let ks = match app {
        App::Matching => {
            for n in g.counts("n", &[5, 6, 7, 8, 9, 10, 11, 12])? {
                out.push(Case { n, param: f64::NAN, model: AppModel::Matching { n } });
            }
            g.integers("k", &[2, 3, 4, 5, 6])?
        }
        App::Occupancy | App::Birthday => {
            let (dn, dl): (&[u64], &[u64]) = if app == App::Occupancy {
                (&[2, 3, 4, 5, 6], &[1, 2, 3, 4, 5, 6, 7, 8])
            } else {
                (&[3, 5, 10, 20, 30], &[2, 3, 4, 5])
            };
            for n in g.counts("n", dn)? {
                for l in g.counts("l", dl)? {
                    let model = if app == App::Occupancy { AppModel::Occupancy { n, l } } else { AppModel::Birthday { n, l } };
                    out.push(Case { n, param: l as f64, model });
                }
            }
            g.integers("off", &[1, 2, 3])?
        }
        App::Triangles | App::TwoRuns => {
            let (dn, dp): (&[u64], &[f64]) = if app == App::Triangles {
                (&[3, 4, 5, 6, 8, 10], &[0.1, 0.3])
            } else {
                (&[20, 50, 100], &[0.05, 0.1, 0.2, 0.3])
            };
            for n in g.counts("n", dn)? {
                for p in g.reals("p", dp) {
                    let model = if app == App::Triangles { AppModel::Triangles { n, p } } else { AppModel::TwoRuns { n, p } };
                    out.push(Case { n, param: p, model });
                }
            }
            g.integers("off", if app == App::Triangles { &[1, 2, 3] } else { &[1, 2, 3, 4, 5] })?
        }
        App::PoissonBinomial => {
            for n in g.counts("n", &[10, 50, 200, 500])? {
                for pmax in g.reals("pmax", &[0.1, 0.5, 0.9]) {
                    if !(pmax > 0.0 && pmax < 1.0) {
                        return Err(config(format!("pmax must lie in (0, 1), got {pmax}")));
                    }
                    out.push(Case { n, param: pmax, model: AppModel::PoissonBinomial { p: pb_probabilities(n, pmax) } });
                }
            }
            g.integers("off", &[1, 2, 3, 4, 5])?
        }
    };
    if out.is_empty() || ks.is_empty() {
        return Err(config("empty validation grid"));
    }
    for c in &out {
        c.model.validate().map_err(CliError::from)?;
    }
    Ok((out, ks))
}

/// `(a, lambda)` of a variant's query.
fn shift(v: Variant, c: &Case) -> stein_md::Result<(i64, f64)> {
    match (v, &c.model) {
        (Variant::Matching, _) => Ok((0, 1.0)),
        (Variant::TwoRunsTranslated, &AppModel::TwoRuns { n, p }) => {
            let (q, _) = two_runs_theorem1_ingredients(n, p)?;
            Ok((q.a, q.lambda))
        }
        (Variant::PbTranslated, AppModel::PoissonBinomial { p }) => {
            let a = pb_shift(p)?;
            Ok((a, c.model.params()?.mu - a as f64))
        }
        _ => Ok((0, c.model.params()?.mu)),
    }
}

fn bound(v: Variant, m: &AppModel, k: i64) -> stein_md::Result<BoundBreakdown> {
    match (v, m) {
        (Variant::Matching, &AppModel::Matching { n }) => matching_bound(n, k),
        (Variant::Occupancy, &AppModel::Occupancy { n, l }) => occupancy_bound(n, l, k),
        (Variant::Birthday, &AppModel::Birthday { n, l }) => birthday_bound(n, l, k),
        (Variant::Triangles, &AppModel::Triangles { n, p }) => triangles_bound(n, p, k),
        (Variant::TwoRunsSizeBias, &AppModel::TwoRuns { n, p }) => two_runs_bound_a0(n, p, k),
        (Variant::TwoRunsTranslated, &AppModel::TwoRuns { n, p }) => two_runs_bound_shifted(n, p, k),
        (Variant::PbSizeBias, AppModel::PoissonBinomial { p }) => pb_bound_a0(p, k),
        (Variant::PbTranslated, AppModel::PoissonBinomial { p }) => pb_bound_shifted(p, k),
        _ => unreachable!("variant {v:?} does not belong to model {m}"),
    }
}

fn tail_source(c: &Case, cfg: &ValidateConfig, exec: Execution) -> CliResult<TailSource> {
    match c.model.exact_table() {
        Ok(t) => Ok(TailSource::Exact(t)),
        Err(Error::SizeGuard(_)) => Ok(TailSource::Simulated(monte_carlo_histogram(&c.model, cfg.samples, cfg.seed, exec)?)),
        Err(e) => Err(e.into()),
    }
}

fn flagged_row(v: Variant, c: &Case, k: i64, method: Method, note: String) -> ValidationRow {
    ValidationRow {
        variant: v,
        n: c.n,
        param: c.param,
        k,
        a: 0,
        lambda: f64::NAN,
        method,
        tail: f64::NAN,
        tail_lo: f64::NAN,
        tail_hi: f64::NAN,
        tail_stderr: f64::NAN,
        poisson_tail: f64::NAN,
        abs_ratio_minus_one: f64::NAN,
        ratio_stderr: f64::NAN,
        bound: f64::NAN,
        passed: None,
        flagged: true,
        note,
    }
}

fn case_rows(app: App, c: &Case, offsets: &[i64], cfg: &ValidateConfig, exec: Execution) -> CliResult<Vec<ValidationRow>> {
    let src = tail_source(c, cfg, exec)?;
    let method = src.method();
    let mut rows = Vec::new();
    for &v in Variant::of(app) {
        let (a, lambda) = match shift(v, c) {
            Ok(s) => s,
            Err(e) => {
                rows.push(flagged_row(v, c, 0, method, format!("not applicable: {e}")));
                continue;
            }
        };
        let ks: Vec<i64> =
            if v == Variant::Matching { offsets.to_vec() } else { offsets.iter().map(|o| lambda.floor() as i64 + o).collect() };
        for k in ks {
            let b = match bound(v, &c.model, k) {
                Ok(b) => b,
                Err(e) => {
                    let mut r = flagged_row(v, c, k, method, format!("not applicable: {e}"));
                    (r.a, r.lambda) = (a, lambda);
                    rows.push(r);
                    continue;
                }
            };
            debug_assert_eq!((b.query.a, b.query.k), (a, k));
            let tv = src.at(a + k);
            let ln_psf = log_poisson_sf(lambda, k)?.ln();
            let psf = ln_psf.exp();
            let mut notes = Vec::new();
            let (err, ratio_stderr, passed) = match method {
                Method::Exact => {
                    let err = (tv.ln_tail - ln_psf).exp_m1().abs();
                    (err, 0.0, b.total + EXACT_SLACK >= err)
                }
                Method::MonteCarlo => {
                    let err = (tv.tail / psf - 1.0).abs();
                    // binomial stderr at the larger of the estimate and the comparator,
                    // so a case with no hits is not judged on a zero stderr
                    let n = cfg.samples as f64;
                    let pt = tv.tail.max(psf).min(1.0);
                    let se = (pt * (1.0 - pt) / n).sqrt() / psf;
                    if n * psf < 10.0 {
                        notes.push("few expected Monte Carlo hits".to_string());
                    }
                    (err, se, b.total >= err - MC_SIGMAS * se)
                }
            };
            let zero_tail = tv.tail == 0.0;
            if zero_tail {
                notes.push("zero tail".to_string());
            }
            rows.push(ValidationRow {
                variant: v,
                n: c.n,
                param: c.param,
                k,
                a,
                lambda,
                method,
                tail: tv.tail,
                tail_lo: tv.lo,
                tail_hi: tv.hi,
                tail_stderr: tv.stderr,
                poisson_tail: psf,
                abs_ratio_minus_one: err,
                ratio_stderr,
                bound: b.total,
                passed: Some(passed),
                flagged: zero_tail,
                note: notes.join("; "),
            });
        }
    }
    Ok(rows)
}

pub fn validate(cfg: &ValidateConfig, exec: Execution) -> CliResult<Vec<ValidationRow>> {
    let (cs, offsets) = cases(cfg.app, &cfg.grid)?;
    let per_case = exec.map_slice(&cs, |c| case_rows(cfg.app, c, &offsets, cfg, exec));
    let mut rows = Vec::new();
    for r in per_case {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn failures(rows: &[ValidationRow]) -> usize {
    rows.iter().filter(|r| r.passed == Some(false)).count()
}

pub fn validation_report(cfg: &ValidateConfig, rows: &[ValidationRow]) -> CsvReport {
    let mut r = CsvReport::new(
        "validate",
        vec![
            ("variant", "text"),
            ("n", "count"),
            ("param", "l: balls; p, pmax: probability"),
            ("k", "count"),
            ("a", "count"),
            ("lambda", "count"),
            ("method", "text"),
            ("tail", "probability"),
            ("tail_lo", "probability"),
            ("tail_hi", "probability"),
            ("tail_stderr", "probability"),
            ("poisson_tail", "probability"),
            ("abs_ratio_minus_one", "dimensionless"),
            ("ratio_stderr", "dimensionless"),
            ("bound", "dimensionless"),
            ("passed", "bool"),
            ("flagged", "bool"),
            ("note", "text"),
        ],
        4,
    );
    r.echo("app", cfg.app.name());
    // resolved values, defaults included
    let (cs, offs) = cases(cfg.app, &cfg.grid).unwrap_or_default();
    for &key in cfg.app.grid_keys() {
        let vals: Vec<String> = match key {
            "n" => dedup(cs.iter().map(|c| c.n.to_string())),
            "l" | "p" | "pmax" => dedup(cs.iter().map(|c| c.param.to_string())),
            _ => offs.iter().map(|o| o.to_string()).collect(),
        };
        r.echo(key, vals.join(","));
    }
    r.echo("seed", cfg.seed);
    r.echo("samples", cfg.samples);
    r.note("tail = P(W >= a + k); poisson_tail = P(Y >= k) with Y ~ Pn(lambda)");
    r.note(format!(
        "exact cases pass if bound + {EXACT_SLACK:e} >= abs_ratio_minus_one; Monte Carlo cases if bound >= abs_ratio_minus_one - {MC_SIGMAS} ratio_stderr"
    ));
    r.note(format!("{} of {} cases failed", failures(rows), rows.len()));
    for x in rows {
        r.push(vec![
            x.variant.name().into(),
            x.n.into(),
            x.param.into(),
            x.k.into(),
            x.a.into(),
            x.lambda.into(),
            x.method.name().into(),
            x.tail.into(),
            x.tail_lo.into(),
            x.tail_hi.into(),
            x.tail_stderr.into(),
            x.poisson_tail.into(),
            x.abs_ratio_minus_one.into(),
            x.ratio_stderr.into(),
            x.bound.into(),
            x.passed.map_or_else(|| "n/a".into(), |p| p.to_string()).into(),
            x.flagged.into(),
            x.note.clone().into(),
        ]);
    }
    r
}

fn dedup(xs: impl Iterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn run(cfg: &ValidateConfig, exec: Execution) -> CliResult<Outcome> {
    let rows = validate(cfg, exec)?;
    let report = validation_report(cfg, &rows);
    let failed = failures(&rows);
    let failure = (failed > 0).then(|| CliError::Validation(format!("{failed} of {} {} cases failed", rows.len(), cfg.app.name())));
    Ok(Outcome { report, failure })
}
