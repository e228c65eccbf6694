//! Smallest resolvable displacement `|mu_hat|` under each decision rule, in
//! units set by the standard error `sigma_mu = sigma / sqrt(N)`.

use serde::{Deserialize, Serialize};

use crate::criteria::{complexity_nu, partition_factor};
use crate::error::{Error, Result};
use crate::special::two_sided_p;

fn check_sigma_mu(sigma_mu: f64) -> Result<()> {
    if !(sigma_mu.is_finite() && sigma_mu > 0.0) {
        return Err(Error::invalid("sigma_mu", format!("must be finite and > 0, got {sigma_mu}")));
    }
    Ok(())
}

/// Leading-order Bayes threshold `sigma_mu * sqrt(2 ln(tau / sigma_mu))`.
pub fn bayes_resolution(sigma_mu: f64, tau: f64) -> Result<f64> {
    check_sigma_mu(sigma_mu)?;
    if !(tau > sigma_mu) || !tau.is_finite() {
        return Err(Error::domain(
            "Bayes resolution",
            format!("needs tau > sigma_mu, got tau = {tau}, sigma_mu = {sigma_mu}"),
        ));
    }
    Ok(sigma_mu * (2.0 * (tau / sigma_mu).ln()).sqrt())
}

/// Exact displacement at which the conjugate log-Bayes factor (null vs. one
/// free mean) vanishes: `sigma_mu * sqrt((1 + r)/r * ln(1 + r))` with
/// `r = tau^2 / sigma_mu^2`.
pub fn bayes_resolution_exact(sigma_mu: f64, tau: f64) -> Result<f64> {
    check_sigma_mu(sigma_mu)?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::invalid("tau", format!("must be finite and > 0, got {tau}")));
    }
    let r = (tau / sigma_mu).powi(2);
    Ok(sigma_mu * ((1.0 + r) / r * r.ln_1p()).sqrt())
}

/// Frequentist rule `z * sigma_mu`.
pub fn frequentist_resolution(sigma_mu: f64, z: f64) -> Result<f64> {
    check_sigma_mu(sigma_mu)?;
    if z.is_nan() || z < 0.0 {
        return Err(Error::invalid("z", format!("must be >= 0, got {z}")));
    }
    Ok(z * sigma_mu)
}

/// Two-sided tail probability of the threshold multiplier `z`.
pub fn frequentist_p_value(z: f64) -> f64 {
    two_sided_p(z)
}

/// `sigma_mu * sqrt(1 + (1 + 1/nu) ln(1 + nu))`.
pub fn nu_resolution(sigma_mu: f64, nu: f64) -> Result<f64> {
    check_sigma_mu(sigma_mu)?;
    if nu.is_nan() || nu < 0.0 {
        return Err(Error::invalid("nu", format!("must be >= 0, got {nu}")));
    }
    Ok(sigma_mu * (1.0 + partition_factor(nu)).sqrt())
}

/// `sigma_mu * sqrt(ln N)`.
pub fn bic_resolution(sigma_mu: f64, n: f64) -> Result<f64> {
    check_sigma_mu(sigma_mu)?;
    if !(n >= 2.0) {
        return Err(Error::invalid("n", format!("BIC resolution needs N >= 2, got {n}")));
    }
    Ok(sigma_mu * n.ln().sqrt())
}

/// `sigma_mu * sqrt(2)`.
pub fn aic_resolution(sigma_mu: f64) -> Result<f64> {
    check_sigma_mu(sigma_mu)?;
    Ok(sigma_mu * std::f64::consts::SQRT_2)
}

/// Inputs for a threshold table. For `delta_k > 1` the thresholds are radii
/// `||mu_hat||` of a `delta_k`-dimensional displacement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionQuery {
    pub sigma_mu: f64,
    pub tau: Option<f64>,
    pub nu: f64,
    pub n: f64,
    pub delta_k: usize,
    pub z: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionRow {
    pub sigma_mu: f64,
    pub frequentist: f64,
    pub frequentist_p: f64,
    pub aic: f64,
    pub bic: Option<f64>,
    pub nu: f64,
    pub ic_nu: f64,
    pub bayes: Option<f64>,
    pub bayes_exact: Option<f64>,
}

impl ResolutionQuery {
    pub fn evaluate(&self) -> Result<ResolutionRow> {
        check_sigma_mu(self.sigma_mu)?;
        if self.delta_k == 0 {
            return Err(Error::invalid("delta_k", "must be >= 1"));
        }
        let dk = self.delta_k as f64;
        // threshold on the squared radius is 2 * Delta K_nu in units of sigma_mu^2
        let radius = |complexity: f64| self.sigma_mu * (2.0 * complexity).sqrt();
        let bayes = match self.tau {
            Some(tau) if tau > self.sigma_mu && self.delta_k == 1 => Some(bayes_resolution(self.sigma_mu, tau)?),
            _ => None,
        };
        let bayes_exact = match self.tau {
            Some(tau) if self.delta_k == 1 => Some(bayes_resolution_exact(self.sigma_mu, tau)?),
            _ => None,
        };
        Ok(ResolutionRow {
            sigma_mu: self.sigma_mu,
            frequentist: frequentist_resolution(self.sigma_mu, self.z)?,
            frequentist_p: frequentist_p_value(self.z),
            aic: radius(dk),
            bic: (self.n >= 2.0).then(|| radius(0.5 * dk * self.n.ln())),
            nu: self.nu,
            ic_nu: radius(complexity_nu(self.delta_k, self.nu)?),
            bayes,
            bayes_exact,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn bayes_examples() {
        assert_relative_eq!(bayes_resolution(1.0, E * E).unwrap(), 2.0, epsilon = 1e-15);
        assert_relative_eq!(bayes_resolution(0.3, 0.3 * E.sqrt()).unwrap(), 0.3, epsilon = 1e-15);
        assert!(bayes_resolution(1.0, 2.0).unwrap() < bayes_resolution(1.0, 4.0).unwrap());
        assert!(bayes_resolution(1.0, 1.0).unwrap_err().is_numeric_domain());
    }

    #[test]
    fn exact_and_leading_order_agree_for_vague_priors() {
        for &ratio in &[1e2, 1e3, 1e5] {
            let lead = bayes_resolution(1.0, ratio).unwrap();
            let exact = bayes_resolution_exact(1.0, ratio).unwrap();
            assert!((lead - exact).abs() / exact < 0.05, "ratio {ratio}: {lead} vs {exact}");
        }
    }

    #[test]
    fn frequentist_examples() {
        assert_relative_eq!(frequentist_p_value(2.0), 0.045_500_263_896_358_4, max_relative = 1e-12);
        assert_eq!(frequentist_resolution(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(frequentist_p_value(0.0), 1.0);
    }

    #[test]
    fn partition_examples() {
        assert_relative_eq!(nu_resolution(1.0, 0.0).unwrap(), aic_resolution(1.0).unwrap(), epsilon = 0.0);
        assert_relative_eq!(nu_resolution(1.0, 1.0).unwrap(), 1.544_763_529_191_407, epsilon = 1e-14);
        assert_relative_eq!(bic_resolution(1.0, E * E).unwrap(), aic_resolution(1.0).unwrap(), epsilon = 1e-15);
        assert!(bic_resolution(1.0, 1.5).is_err());
    }

    #[test]
    fn query_one_dof_matches_scalar_functions() {
        let q = ResolutionQuery {
            sigma_mu: 0.1,
            tau: Some(10.0),
            nu: 1.0,
            n: 100.0,
            delta_k: 1,
            z: 2.0,
        };
        let row = q.evaluate().unwrap();
        assert_relative_eq!(row.ic_nu, nu_resolution(0.1, 1.0).unwrap(), epsilon = 1e-15);
        assert_relative_eq!(row.bic.unwrap(), bic_resolution(0.1, 100.0).unwrap(), epsilon = 1e-15);
        assert_relative_eq!(row.aic, aic_resolution(0.1).unwrap(), epsilon = 1e-15);
        assert_relative_eq!(row.bayes.unwrap(), bayes_resolution(0.1, 10.0).unwrap(), epsilon = 1e-15);
    }
}
