//! The Stein equation `lambda f(j+1) - j f(j) = h(j) - E h(Y)` for the tail
//! indicator `h = 1[k, inf)` and the sup-norm constants of its solution.

mod conjecture;
mod factors;
mod solution;

pub use conjecture::{conjecture_scan, ln_gap_increasing, ConjectureRow};
pub use factors::{stein_factors, SteinFactorSet};
pub use solution::{
    default_i_max, solve_stein_equation, verify_lemma_properties, LemmaReport, PropertyCheck,
    SteinSolution, ROUTE_TOLERANCE,
};
