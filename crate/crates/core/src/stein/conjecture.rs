use super::factors::stein_factors;
use crate::error::Result;
use crate::exec::Execution;

/// One row of the `c1_minus - c1_plus` gap scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureRow {
    pub lambda: f64,
    pub k: u64,
    pub c1_minus: f64,
    pub c1_plus: f64,
    pub gap: f64,
    /// `ln(gap)`, NaN when the gap is not positive.
    pub ln_gap: f64,
    /// Set when `c1_minus <= c1_plus`.
    pub flagged: bool,
}

/// Scans `k = floor(lambda)+1 ..= floor(lambda)+k_max_offset` for every
/// lambda. Rows come back ordered by (lambda input order, k).
pub fn conjecture_scan(lambdas: &[f64], k_max_offset: u64, exec: Execution) -> Result<Vec<ConjectureRow>> {
    let grid: Vec<(f64, i64)> = lambdas
        .iter()
        .flat_map(|&lambda| {
            let base = lambda.floor() as i64;
            (1..=k_max_offset as i64).map(move |off| (lambda, base + off))
        })
        .collect();
    exec.map_slice(&grid, |&(lambda, k)| {
        let s = stein_factors(lambda, k)?;
        let gap = s.c1_minus - s.c1_plus;
        Ok(ConjectureRow {
            lambda,
            k: k as u64,
            c1_minus: s.c1_minus,
            c1_plus: s.c1_plus,
            gap,
            ln_gap: if gap > 0.0 { gap.ln() } else { f64::NAN },
            flagged: gap <= 0.0,
        })
    })
    .into_iter()
    .collect()
}

/// Whether `ln_gap` is strictly increasing in k within each lambda block.
pub fn ln_gap_increasing(rows: &[ConjectureRow]) -> bool {
    rows.windows(2)
        .filter(|w| w[0].lambda == w[1].lambda)
        .all(|w| w[1].ln_gap > w[0].ln_gap)
}
