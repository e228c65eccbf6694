//! Entropic volumes `V = exp(S)` and the Occam-factor reading of the evidence.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{evidence_information, mle_information, GaussianModel, PriorSpec, Summary};

/// `ln V` of an axis-aligned normal with the given standard deviations.
pub fn log_distribution_volume(sds: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &sd in sds {
        if !(sd.is_finite() && sd > 0.0) {
            return Err(Error::invalid("sd", format!("must be finite and > 0, got {sd}")));
        }
        total += 0.5 * (2.0 * PI * E).ln() + sd.ln();
    }
    Ok(total)
}

/// `V = prod_k sqrt(2 pi e) sd_k`.
pub fn distribution_volume(sds: &[f64]) -> Result<f64> {
    log_distribution_volume(sds).map(f64::exp)
}

/// Volume of a uniform distribution on a `k`-cube of side `side`.
pub fn uniform_volume(side: f64, k: usize) -> Result<f64> {
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::invalid("side", format!("must be finite and > 0, got {side}")));
    }
    Ok(side.powi(k as i32))
}

/// `V_N / V_0`. Not clamped: a prior narrower than the data gives a ratio above 1.
pub fn occam_factor(v_n: f64, v_0: f64) -> Result<f64> {
    for (name, v) in [("v_n", v_n), ("v_0", v_0)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(name, format!("must be finite and > 0, got {v}")));
        }
    }
    Ok(v_n / v_0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OccamDecomposition {
    /// `ln V_N` of the flat-prior posterior, `(K/2) ln(2 pi e sigma^2 / N)`.
    pub log_v_n: f64,
    /// `ln V_0` of the prior, `(K/2) ln(2 pi e tau^2)`.
    pub log_v_0: f64,
    pub log_max_likelihood: f64,
    /// `ln(V_N / V_0) + ln q(x^N | theta_hat)`.
    pub approx_log_evidence: f64,
    pub exact_log_evidence: f64,
    /// `exact - approx`.
    pub discrepancy: f64,
}

pub fn occam_decomposition(summary: &Summary, model: &GaussianModel, prior: &PriorSpec) -> Result<OccamDecomposition> {
    let k = model.free_dims();
    let tau = match prior.tau() {
        Some(t) => t,
        None if k == 0 => 1.0,
        None => return Err(Error::ImproperPrior { quantity: "prior volume" }),
    };
    let log_max_likelihood = -mle_information(summary, model)?;
    let exact_log_evidence = -evidence_information(summary, model, prior)?;
    let log_v_n = log_distribution_volume(&vec![summary.sigma_mu(); k])?;
    let log_v_0 = log_distribution_volume(&vec![tau; k])?;
    let approx_log_evidence = log_v_n - log_v_0 + log_max_likelihood;
    Ok(OccamDecomposition {
        log_v_n,
        log_v_0,
        log_max_likelihood,
        approx_log_evidence,
        exact_log_evidence,
        discrepancy: exact_log_evidence - approx_log_evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::SampleSet;
    use approx::assert_relative_eq;

    #[test]
    fn unit_volume() {
        let sd = (2.0 * PI * E).sqrt().recip();
        assert_relative_eq!(distribution_volume(&[sd]).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(distribution_volume(&[]).unwrap(), 1.0);
        assert!(distribution_volume(&[0.0]).is_err());
    }

    #[test]
    fn box_volume() {
        assert_relative_eq!(uniform_volume(3.0, 2).unwrap(), 9.0);
        assert_eq!(uniform_volume(3.0, 0).unwrap(), 1.0);
    }

    #[test]
    fn occam_ratio_is_not_clamped() {
        assert_relative_eq!(occam_factor(2.0, 1.0).unwrap(), 2.0);
        assert!(occam_factor(1.0, 0.0).is_err());
    }

    #[test]
    fn decomposition_matches_closed_form_discrepancy() {
        let s = SampleSet::scalar(&[0.3, 0.5, -0.1, 0.9], 1.0).unwrap();
        let m = GaussianModel::nested(1, 1);
        let tau = 2.0;
        let d = occam_decomposition(s.summary(), &m, &PriorSpec::normal(tau).unwrap()).unwrap();
        let sm2 = s.summary().sigma_mu().powi(2);
        let r = tau * tau / sm2;
        let xbar = s.stats().mean()[0];
        let expected = -(0.5 * (1.0 / r).ln_1p() + xbar * xbar / (2.0 * (sm2 + tau * tau)));
        assert_relative_eq!(d.discrepancy, expected, epsilon = 1e-12);
    }
}
