//! Numerically stable log-domain building blocks.
//!
//! Every public tail quantity is returned as a [`LogProb`]; linear values are
//! only produced at the boundary via [`LogProb::prob`].

mod bigmath;
pub(crate) mod dd;
mod logprob;
mod normal;
mod poisson;

pub use bigmath::{ln_biguint, ln_ratio_biguint};
pub use dd::Dd;
pub use logprob::{ln_add_exp, ln_sub_exp, ln_sum_exp, log_diff_exp, log_sum_exp, LogProb};
pub use normal::{log_normal_sf, log_std_normal_sf};
pub use poisson::{
    ln_factorial, log_poisson_cdf, log_poisson_pmf, log_poisson_sf, poisson_tail_triple,
    PoissonTailTriple,
};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
