//! Seeded Monte Carlo experiments.
//!
//! Every replicate draws from its own keyed stream
//! `(seed, experiment, cell, replicate)` and results are reduced in index
//! order, so a report depends only on its config and never on the number of
//! worker threads.

mod config;
mod experiments;
mod figures;
mod lindley;
mod report;
mod sampling;

pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::{
    binning_experiment, cross_entropy_experiment, derivative_experiment, expected_information_at_truth,
    expected_predictive_information, loss_ratio_experiment, occam_experiment, true_cross_entropy, truth_in_model,
    unbiasedness_experiment, TrueCrossEntropy,
};
pub use figures::{bayes_detection_n, figure_prepost, figure_resolution, frequentist_detection_n};
pub use lindley::{lambda_at, lindley_search, LindleyWitness};
pub use report::{Cell, Estimate, ExperimentReport};
pub use sampling::{generate_dataset, run_indexed, sample_row, sample_stats, sample_summary};

use crate::error::Result;

/// Runs the experiment named in `config` on `workers` threads (`None`: all cores).
pub fn run_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    match config.experiment {
        ExperimentKind::Unbiasedness => unbiasedness_experiment(config, workers),
        ExperimentKind::CrossEntropy => cross_entropy_experiment(config, workers),
        ExperimentKind::Resolution => figure_resolution(config),
        ExperimentKind::Prepost => figure_prepost(config, workers),
        ExperimentKind::Derivative => derivative_experiment(config, workers),
        ExperimentKind::Binning => binning_experiment(config, workers),
        ExperimentKind::Occam => occam_experiment(config, workers),
        ExperimentKind::LossRatio => loss_ratio_experiment(config, workers),
        ExperimentKind::Lindley => {
            config.validate()?;
            let n = config.sample_sizes()?[0];
            let w = lindley_search(config.confidence, config.posterior_target, n, config.sigma)?;
            let mut report = ExperimentReport::new(config);
            report.checks.insert("rejected".into(), w.rejected);
            report.checks.insert("posterior_met".into(), w.posterior_met);
            report.witness = Some(w);
            Ok(report)
        }
    }
}
