//! The partition-indexed information criterion and its AIC / BIC limits.

use crate::error::{Error, Result};
use crate::gaussian::{mle_information, GaussianModel, Summary};

use super::{CriterionId, CriterionReport, Partition};

/// `(1 + 1/nu) ln(1 + nu)`, with its limits 1 at `nu = 0` and `inf` at `nu = inf`.
pub(crate) fn partition_factor(nu: f64) -> f64 {
    if nu == 0.0 {
        1.0
    } else if nu.is_infinite() {
        f64::INFINITY
    } else {
        let l = nu.ln_1p();
        l / nu + l
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if nu.is_nan() || nu < 0.0 {
        return Err(Error::invalid("nu", format!("must be >= 0 or infinite, got {nu}")));
    }
    Ok(())
}

/// Complexity `K_nu = (K/2) [1 + (1 + 1/nu) ln(1 + nu)]`.
///
/// `nu = 0` is the predictive limit and returns `K` exactly. `nu = inf` (no
/// training data, flat prior) returns `+inf` for `K >= 1` and 0 for `K = 0`.
pub fn complexity_nu(free_dims: usize, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if free_dims == 0 {
        return Ok(0.0);
    }
    Ok(0.5 * free_dims as f64 * (1.0 + partition_factor(nu)))
}

/// `IC^nu = h(x^N | theta_hat) + K_nu`.
pub fn generalized_ic(
    summary: &Summary,
    model: &GaussianModel,
    model_id: &str,
    nu: f64,
) -> Result<CriterionReport> {
    let complexity = complexity_nu(model.free_dims(), nu)?;
    let fit = mle_information(summary, model)?;
    Ok(CriterionReport::new(CriterionId::IcNu, model_id, model.free_dims(), fit + complexity)
        .with_complexity(complexity)
        .with_nu(nu))
}

/// [`generalized_ic`] at the realized ratio of an integral partition.
pub fn generalized_ic_for(
    summary: &Summary,
    model: &GaussianModel,
    model_id: &str,
    partition: Partition,
) -> Result<CriterionReport> {
    partition.check_n(summary.n())?;
    Ok(generalized_ic(summary, model, model_id, partition.nu())?.with_partition(partition))
}

/// `AIC = h(x^N | theta_hat) + K`.
pub fn aic(summary: &Summary, model: &GaussianModel, model_id: &str) -> Result<CriterionReport> {
    let complexity = model.free_dims() as f64;
    let fit = mle_information(summary, model)?;
    Ok(CriterionReport::new(CriterionId::Aic, model_id, model.free_dims(), fit + complexity)
        .with_complexity(complexity))
}

/// BIC penalty `(K/2) ln N`.
pub fn bic_complexity(free_dims: usize, n: f64) -> f64 {
    if free_dims == 0 {
        0.0
    } else {
        0.5 * free_dims as f64 * n.ln()
    }
}

/// `BIC = h(x^N | theta_hat) + (K/2) ln N`.
pub fn bic(summary: &Summary, model: &GaussianModel, model_id: &str) -> Result<CriterionReport> {
    let complexity = bic_complexity(model.free_dims(), summary.n() as f64);
    let fit = mle_information(summary, model)?;
    Ok(CriterionReport::new(CriterionId::Bic, model_id, model.free_dims(), fit + complexity)
        .with_complexity(complexity))
}

/// The IC decision rule for a nested pair: true when
/// `h_0(x^N | theta_hat) - h_1(x^N | theta_hat) > Delta K_nu`, i.e. model one
/// is chosen.
pub fn ic_prefers_model_one(
    summary: &Summary,
    model0: &GaussianModel,
    model1: &GaussianModel,
    nu: f64,
) -> Result<bool> {
    let lambda = mle_information(summary, model0)? - mle_information(summary, model1)?;
    let dk = complexity_nu(model1.free_dims(), nu)? - complexity_nu(model0.free_dims(), nu)?;
    Ok(lambda > dk)
}
