//! Exact laws of the count variables, with Monte Carlo where exhaustive
//! computation is out of reach.

mod binomial;
mod birthday;
mod matching;
mod model;
mod monte_carlo;
mod occupancy;
mod poisson_binomial;
mod table;
mod triangles;
mod two_runs;

pub use binomial::{binomial_log_pmf, binomial_log_sf};
pub use birthday::{birthday_mu, birthday_params, birthday_table_small, BIRTHDAY_MAX_OUTCOMES};
pub use matching::{matching_params, matching_table};
pub use model::AppModel;
pub use monte_carlo::{
    monte_carlo_histogram, monte_carlo_tail, monte_carlo_tail_with, McHistogram, MonteCarloEstimate, MC_BLOCK,
    MC_MIN_SAMPLES,
};
pub use occupancy::{occupancy_params, occupancy_table, OCCUPANCY_MAX_BOXES};
pub use poisson_binomial::{
    poisson_binomial_params, poisson_binomial_table, poisson_binomial_table_with_budget, records_params,
    records_table, records_table_with_budget, DEFAULT_DROP_BUDGET,
};
pub use table::{DistributionTable, TailBracket};
pub use triangles::{triangles_params, triangles_table_small, triangles_table_small_with, TRIANGLES_MAX_EDGES};
pub use two_runs::{two_runs_params, two_runs_table};

/// Mean and variance of a count; `mu2 = sum p_i^2` for Poisson-binomial laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub mu: f64,
    pub sigma2: f64,
    pub mu2: Option<f64>,
}
