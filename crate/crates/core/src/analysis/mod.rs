//! Closed-form resolution, significance, information and volume measures.

mod curves;
mod information;
mod resolution;
mod significance;
mod volume;

pub use curves::{complexity_curve, resolution_curve, significance_curve, Curve, Grid};
pub use information::{missing_information, missing_information_from_summary, parameter_information};
pub use resolution::{
    aic_resolution, bayes_resolution, bayes_resolution_exact, bic_resolution, frequentist_p_value,
    frequentist_resolution, nu_resolution, ResolutionQuery, ResolutionRow,
};
pub use significance::significance_level;
pub use volume::{
    distribution_volume, log_distribution_volume, occam_decomposition, occam_factor, uniform_volume,
    OccamDecomposition,
};
