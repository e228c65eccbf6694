//! Model-selection criteria and decision rules.

mod bayes;
mod crossval;
mod ic;
mod menu;
mod partition;
mod report;
mod select;

pub use bayes::{
    fractional_bayes_information, log_bayes_factor, posterior_bayes_information, posterior_null_probability,
    BayesFactor,
};
pub use crossval::{
    binomial, generalization_subsets, leave_k_out_cross_entropy, loo_cross_entropy, pseudo_bayes_factor,
    CrossEntropyEstimate, PseudoBayesFactor, DEFAULT_BUDGET,
};
pub use ic::{aic, bic, bic_complexity, complexity_nu, generalized_ic, generalized_ic_for, ic_prefers_model_one};
pub(crate) use ic::partition_factor;
pub use menu::{evaluate_menu, MenuEvaluation, MenuOptions, ModelSpec, Selection};
pub use partition::Partition;
pub use report::{CriterionId, CriterionReport};
pub use select::select_model;
