use crate::criteria::{leave_k_out_cross_entropy, loo_cross_entropy, Partition};
use crate::error::{Error, Result};
use crate::gaussian::{evidence_information, posterior, GaussianModel, PriorSpec, SampleSet, Summary};

fn require_tau(model: &GaussianModel, prior: &PriorSpec, quantity: &'static str) -> Result<Option<f64>> {
    match prior.tau() {
        Some(tau) => Ok(Some(tau)),
        None if model.free_dims() == 0 => Ok(None),
        None => Err(Error::ImproperPrior { quantity }),
    }
}

/// Prior-to-posterior KL divergence of the free coordinates, in nats.
pub fn parameter_information(summary: &Summary, model: &GaussianModel, prior: &PriorSpec) -> Result<f64> {
    model.check(summary)?;
    let Some(tau) = require_tau(model, prior, "parameter information")? else {
        return Ok(0.0);
    };
    if summary.n() == 0 {
        return Ok(0.0);
    }
    let post = posterior(summary, model, prior)?;
    let s = post.sd;
    let t2 = tau * tau;
    Ok(post
        .mean
        .iter()
        .map(|m| (tau / s).ln() + (s * s + m * m) / (2.0 * t2) - 0.5)
        .sum())
}

/// Missing information `I' = H^{N|0} - H^{1|N-1}`, the gap between the
/// postdictive and predictive cross-entropy estimates. The leave-one-out term
/// uses subset enumeration (or a seeded sample when `N` exceeds `budget`).
pub fn missing_information(
    samples: &SampleSet,
    model: &GaussianModel,
    prior: &PriorSpec,
    budget: usize,
    seed: u64,
) -> Result<f64> {
    require_tau(model, prior, "missing information")?;
    let n = samples.n();
    if n < 2 {
        return Err(Error::invalid("samples", format!("missing information needs N >= 2, got {n}")));
    }
    let post = evidence_information(samples.summary(), model, prior)?;
    let pred = leave_k_out_cross_entropy(samples, model, prior, Partition::leave_one_out(n)?, budget, seed)?;
    Ok(post - pred.value)
}

/// Same as [`missing_information`] with the leave-one-out term in closed form.
pub fn missing_information_from_summary(summary: &Summary, model: &GaussianModel, prior: &PriorSpec) -> Result<f64> {
    require_tau(model, prior, "missing information")?;
    if summary.n() < 2 {
        return Err(Error::invalid("samples", format!("missing information needs N >= 2, got {}", summary.n())));
    }
    Ok(evidence_information(summary, model, prior)? - loo_cross_entropy(summary, model, prior)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_observation_example() {
        let s = SampleSet::scalar(&[0.0], 1.0).unwrap();
        let i = parameter_information(s.summary(), &GaussianModel::nested(1, 1), &PriorSpec::normal(1.0).unwrap())
            .unwrap();
        assert_relative_eq!(i, 2f64.sqrt().ln() + 0.25 - 0.5, epsilon = 1e-15);
    }

    #[test]
    fn zero_without_data() {
        let s = SampleSet::from_flat(vec![], 1, 1.0).unwrap();
        let i = parameter_information(s.summary(), &GaussianModel::nested(1, 1), &PriorSpec::normal(3.0).unwrap())
            .unwrap();
        assert_eq!(i, 0.0);
    }

    #[test]
    fn improper_prior_rejected() {
        let s = SampleSet::scalar(&[0.1, 0.2, -0.3], 1.0).unwrap();
        let m = GaussianModel::nested(1, 1);
        assert!(parameter_information(s.summary(), &m, &PriorSpec::ImproperFlat).unwrap_err().is_numeric_domain());
        assert!(missing_information(&s, &m, &PriorSpec::ImproperFlat, 100, 1).unwrap_err().is_numeric_domain());
    }

    #[test]
    fn null_model_has_no_missing_information() {
        let s = SampleSet::scalar(&[0.4, -1.2, 0.9, 2.0], 1.5).unwrap();
        let m = GaussianModel::null(1);
        let prior = PriorSpec::normal(1.0).unwrap();
        assert!(missing_information(&s, &m, &prior, 100, 7).unwrap().abs() < 1e-12);
    }

    #[test]
    fn enumerated_and_closed_form_agree() {
        let s = SampleSet::scalar(&[0.4, -1.2, 0.9, 2.0, 0.3], 1.5).unwrap();
        let m = GaussianModel::nested(1, 1);
        let prior = PriorSpec::normal(4.0).unwrap();
        let a = missing_information(&s, &m, &prior, 100, 7).unwrap();
        let b = missing_information_from_summary(s.summary(), &m, &prior).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-10);
    }
}
