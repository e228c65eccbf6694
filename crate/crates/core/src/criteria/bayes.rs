//! Bayes factors proper and the two double-use-of-data variants
//! (posterior and fractional Bayes factors).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    evidence_information, ln_2pi_var, mle_information, posterior, GaussianModel, PriorSpec, Summary,
};

/// Log-Bayes factor `lambda_B = h_0(x^N) - h_1(x^N)`; negative values favor
/// model zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesFactor {
    pub lambda: f64,
    /// Posterior probability of model zero under equal model priors.
    pub posterior_null: f64,
}

impl BayesFactor {
    pub fn from_lambda(lambda: f64) -> Self {
        Self {
            lambda,
            posterior_null: posterior_null_probability(lambda),
        }
    }

    pub fn selects_model_zero(&self) -> bool {
        self.lambda < 0.0
    }
}

/// `1 / (1 + e^lambda)`, evaluated without overflow.
pub fn posterior_null_probability(lambda: f64) -> f64 {
    if lambda > 0.0 {
        let e = (-lambda).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + lambda.exp())
    }
}

pub fn log_bayes_factor(
    summary: &Summary,
    model0: &GaussianModel,
    model1: &GaussianModel,
    prior0: &PriorSpec,
    prior1: &PriorSpec,
) -> Result<BayesFactor> {
    let h0 = evidence_information(summary, model0, prior0)?;
    let h1 = evidence_information(summary, model1, prior1)?;
    Ok(BayesFactor::from_lambda(h0 - h1))
}

/// `h(x^N | x^N)`: minus the log of the likelihood averaged over the posterior.
pub fn posterior_bayes_information(summary: &Summary, model: &GaussianModel, prior: &PriorSpec) -> Result<f64> {
    model.check(summary)?;
    if summary.n() == 0 {
        if prior.is_proper() || model.free_dims() == 0 {
            return Ok(0.0);
        }
        return Err(Error::ImproperPrior {
            quantity: "posterior Bayes information without data",
        });
    }
    let post = posterior(summary, model, prior)?;
    let fit = mle_information(summary, model)?;
    let n = summary.n() as f64;
    let s2 = summary.sigma() * summary.sigma();
    let v = post.sd * post.sd;
    let spread: f64 = post
        .mean
        .iter()
        .zip(summary.stats().mean())
        .map(|(m, xbar)| 0.5 * (n * v / s2).ln_1p() + (xbar - m).powi(2) / (2.0 * (s2 / n + v)))
        .sum();
    Ok(fit + spread)
}

/// `H_FBF(b) = ln E_pi q^b(x^N | theta) - ln E_pi q(x^N | theta)`.
///
/// A likelihood raised to `b` is a Gaussian likelihood with variance
/// `sigma^2 / b`, which keeps both terms in closed form.
pub fn fractional_bayes_information(
    summary: &Summary,
    model: &GaussianModel,
    prior: &PriorSpec,
    b: f64,
) -> Result<f64> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::invalid("b", format!("fraction must lie in (0, 1), got {b}")));
    }
    let h = evidence_information(summary, model, prior)?;
    Ok(h - fractional_information(summary, model, prior, b)?)
}

/// `-ln E_pi q^b(x^N | theta)`.
fn fractional_information(summary: &Summary, model: &GaussianModel, prior: &PriorSpec, b: f64) -> Result<f64> {
    let sigma = summary.sigma();
    let s2 = sigma * sigma;
    let n = summary.n() as f64;
    let stats = summary.stats();
    let pinned: f64 = model
        .fixed_reference()
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            b * (0.5 * n * ln_2pi_var(sigma) + stats.sse_about(model.free_dims() + j, c) / (2.0 * s2))
        })
        .sum();
    if model.free_dims() == 0 {
        return Ok(pinned);
    }
    let tau = prior.tau().ok_or(Error::ImproperPrior {
        quantity: "fractional marginal likelihood",
    })?;
    if summary.n() == 0 {
        return Ok(pinned);
    }
    let free: f64 = (0..model.free_dims())
        .map(|k| {
            let m = stats.mean()[k];
            0.5 * n * b * ln_2pi_var(sigma)
                + b * stats.sse()[k] / (2.0 * s2)
                + 0.5 * (b * n * tau * tau / s2).ln_1p()
                + m * m / (2.0 * (s2 / (b * n) + tau * tau))
        })
        .sum();
    Ok(free + pinned)
}
