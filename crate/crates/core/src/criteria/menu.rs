//! Evaluating every criterion over a menu of candidate models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{evidence_information, GaussianModel, PriorSpec, SampleSet};

use super::{
    aic, bic, fractional_bayes_information, generalized_ic_for, leave_k_out_cross_entropy,
    posterior_bayes_information, select_model, CriterionId, CriterionReport, Partition,
};

/// A labelled candidate model with its prior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub id: String,
    pub model: GaussianModel,
    pub prior: PriorSpec,
}

impl ModelSpec {
    pub fn new(id: impl Into<String>, model: GaussianModel, prior: PriorSpec) -> Self {
        Self {
            id: id.into(),
            model,
            prior,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MenuOptions {
    pub partition: Partition,
    pub budget: usize,
    pub seed: u64,
    /// Fraction for the fractional Bayes factor; `None` uses `1/N`.
    pub fraction: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Selection {
    pub criterion_id: CriterionId,
    pub model_id: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MenuEvaluation {
    pub reports: Vec<CriterionReport>,
    pub selections: Vec<Selection>,
    /// Criteria that could not be evaluated for some model, with the reason.
    pub skipped: Vec<(CriterionId, String)>,
}

/// Runs AIC, BIC, IC^nu, the leave-k-out term, and (when every prior in the
/// menu is proper) the evidence, posterior and fractional Bayes criteria.
pub fn evaluate_menu(samples: &SampleSet, menu: &[ModelSpec], options: &MenuOptions) -> Result<MenuEvaluation> {
    if menu.is_empty() {
        return Err(Error::invalid("menu", "need at least one model"));
    }
    let summary = samples.summary();
    let b = options.fraction.unwrap_or(1.0 / samples.n().max(2) as f64);

    type Eval<'a> = Box<dyn Fn(&ModelSpec) -> Result<CriterionReport> + 'a>;
    let evals: Vec<(CriterionId, Eval)> = vec![
        (CriterionId::Aic, Box::new(|m: &ModelSpec| aic(summary, &m.model, &m.id))),
        (CriterionId::Bic, Box::new(|m: &ModelSpec| bic(summary, &m.model, &m.id))),
        (
            CriterionId::IcNu,
            Box::new(|m: &ModelSpec| generalized_ic_for(summary, &m.model, &m.id, options.partition)),
        ),
        (
            CriterionId::PseudoBfTerm,
            Box::new(|m: &ModelSpec| {
                leave_k_out_cross_entropy(samples, &m.model, &m.prior, options.partition, options.budget, options.seed)
                    .map(|e| e.to_report(&m.id, m.model.free_dims()))
            }),
        ),
        (
            CriterionId::LogEvidence,
            Box::new(|m: &ModelSpec| {
                let h = evidence_information(summary, &m.model, &m.prior)?;
                Ok(CriterionReport::new(CriterionId::LogEvidence, &m.id, m.model.free_dims(), h)
                    .with_partition(Partition::postdictive(samples.n())?))
            }),
        ),
        (
            CriterionId::PosteriorBfTerm,
            Box::new(|m: &ModelSpec| {
                let h = posterior_bayes_information(summary, &m.model, &m.prior)?;
                Ok(CriterionReport::new(CriterionId::PosteriorBfTerm, &m.id, m.model.free_dims(), h))
            }),
        ),
        (
            CriterionId::Fractional,
            Box::new(move |m: &ModelSpec| {
                let h = fractional_bayes_information(summary, &m.model, &m.prior, b)?;
                Ok(CriterionReport::new(CriterionId::Fractional, &m.id, m.model.free_dims(), h))
            }),
        ),
    ];

    let mut out = MenuEvaluation {
        reports: Vec::new(),
        selections: Vec::new(),
        skipped: Vec::new(),
    };
    for (id, eval) in evals {
        match menu.iter().map(&eval).collect::<Result<Vec<_>>>() {
            Ok(reports) => {
                let chosen = select_model(&reports)?.model_id.clone();
                out.selections.push(Selection {
                    criterion_id: id,
                    model_id: chosen,
                });
                out.reports.extend(reports);
            }
            // evidence-type criteria are undefined for improper priors; note and move on
            Err(e) if e.is_numeric_domain() => out.skipped.push((id, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
