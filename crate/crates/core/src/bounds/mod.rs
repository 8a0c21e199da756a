//! Moderate-deviation error bounds: the generic local-dependence,
//! size-bias and zero-bias evaluators, and their instantiations for each
//! application.

mod applications;
mod generic;

pub use applications::{
    birthday_bound, matching_bound, occupancy_bound, pb_bound_a0, pb_bound_shifted, pb_lower_bound, pb_shift,
    pb_theta, records_bound, records_bound_at, triangles_bound, two_runs_bound_a0, two_runs_bound_shifted,
    two_runs_shift, two_runs_theorem1_ingredients, ProdBinLowerBoundInputs,
};
pub use generic::{
    corollary1_bound, corollary1_sum_term, left_tail_bound, left_tail_exact_zero, size_bias_e_abs, theorem12_bound,
    theorem1_bound, theorem1_sum_term, theorem2_bound, BoundBreakdown, Corollary1Summand, CouplingKind,
    SizeBiasSummary, TailShiftQuery, Theorem1Ingredients, Theorem1Summand, C1_LAMBDA_SIGMA_TERM, C1_MU_TERM,
    LEFT_TAIL_TERM, MAIN_C2_TERM,
};
