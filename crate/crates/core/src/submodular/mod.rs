//! Monotone submodular objectives over packing constraints.
//!
//! The pipeline is: continuous greedy on the multilinear extension `F` over
//! the (by default strengthened) LP polytope, then the same sample-and-alter
//! rounding as the additive case. The remaining items here are exact
//! checkers for the inequalities that make the rounding step work for
//! submodular `f`, usable on small ground sets.

mod greedy;
mod multilinear;
mod oracle;
mod subadditivity;

pub use greedy::{
    check_good_s, continuous_greedy, continuous_greedy_with, exact_submodular_optimum, maximize_submodular,
    sorted_scale, GoodSCheck, GreedyOptions, GreedyResult, GradientMode, SubmodularRounding,
};
pub use multilinear::{multilinear_estimate, multilinear_exact, MeanEstimate, ValueTable, EXACT_MAX_N, TABLE_MAX_N};
pub use oracle::{check_monotone_submodular, OracleCheck, OracleSpec, SubmodularOracle, ValueOracle, ORACLE_CHECK_MAX_N};
pub use subadditivity::{
    check_retained_value, check_retained_value_with, check_subadditivity, estimate_altered_value,
    AlterationFamily, AlteredValueEstimate, RetainedValueCheck, FamilyViolation, SubadditivityCheck, SUBADDITIVITY_TOL,
};
