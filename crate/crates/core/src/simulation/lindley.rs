use serde::{Deserialize, Serialize};

use crate::criteria::log_bayes_factor;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianModel, PriorSpec, SampleSet};
use crate::special::{normal_quantile, two_sided_p};

/// A concrete dataset configuration that is rejected by a two-sided test at
/// the requested confidence while the Bayes factor gives the null at least
/// the requested posterior probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LindleyWitness {
    pub confidence: f64,
    pub posterior_target: f64,
    /// Observed mean in units of `sigma_mu`.
    pub z: f64,
    /// Smallest `r = N tau^2 / sigma^2` meeting the posterior target at `z`.
    pub r_min: f64,
    /// `r` of the instantiation, slightly above `r_min`.
    pub r: f64,
    pub n: usize,
    pub sigma: f64,
    pub tau: f64,
    pub mu_hat: f64,
    pub sigma_mu: f64,
    /// Two-sided p-value of the instantiated dataset.
    pub p_value: f64,
    /// `h_0 - h_1` of the instantiated dataset.
    pub lambda_b: f64,
    pub posterior_null: f64,
    pub rejected: bool,
    pub posterior_met: bool,
}

/// `lambda_B(z, r) = (z^2 / 2) r / (1 + r) - ln(1 + r) / 2`.
pub fn lambda_at(z: f64, r: f64) -> f64 {
    0.5 * z * z * r / (1.0 + r) - 0.5 * r.ln_1p()
}

/// Smallest `r` with `lambda_at(z, r) <= -threshold`, `threshold >= 0`.
fn min_ratio(z: f64, threshold: f64) -> Result<f64> {
    let g = |r: f64| -lambda_at(z, r) - threshold;
    // -lambda is decreasing up to r = z^2 - 1, then increasing without bound
    let mut lo = (z * z - 1.0).max(0.0);
    if g(lo) >= 0.0 {
        // already met at the turning point; the set is an interval starting at 0
        lo = 0.0;
        if g(0.0) >= 0.0 {
            return Ok(0.0);
        }
        let mut hi = (z * z - 1.0).max(0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return Ok(hi);
    }
    let mut hi = lo.max(1.0);
    while g(hi) < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::domain("Lindley search", "no prior scale reaches the target"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Searches for the Lindley configuration with `n` observations of scale
/// `sigma`. The observed mean sits just inside the rejection region, at
/// `z = max(z_conf, 2) (1 + 1e-3)` standard errors.
pub fn lindley_search(confidence: f64, posterior_target: f64, n: usize, sigma: f64) -> Result<LindleyWitness> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::invalid("confidence", format!("must lie in (0, 1), got {confidence}")));
    }
    if !(0.5..1.0).contains(&posterior_target) {
        return Err(Error::invalid("posterior_target", format!("must lie in [0.5, 1), got {posterior_target}")));
    }
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    let z_conf = normal_quantile(0.5 * (1.0 + confidence))?;
    let z = z_conf.max(2.0) * (1.0 + 1e-3);
    let threshold = (posterior_target / (1.0 - posterior_target)).ln();
    let r_min = min_ratio(z, threshold)?;
    let r = (r_min * (1.0 + 1e-6)).max(f64::MIN_POSITIVE);

    let nf = n as f64;
    let sigma_mu = sigma / nf.sqrt();
    let tau = sigma * (r / nf).sqrt();
    let mu_hat = z * sigma_mu;

    // verify on an actual dataset through the general evidence code
    let data = SampleSet::scalar(&vec![mu_hat; n], sigma)?;
    let observed = data.stats().mean()[0];
    let p_value = two_sided_p(observed.abs() / sigma_mu);
    let bf = log_bayes_factor(
        data.summary(),
        &GaussianModel::null(1),
        &GaussianModel::nested(1, 1),
        &PriorSpec::ImproperFlat,
        &PriorSpec::normal(tau)?,
    )?;
    Ok(LindleyWitness {
        confidence,
        posterior_target,
        z,
        r_min,
        r,
        n,
        sigma,
        tau,
        mu_hat,
        sigma_mu,
        p_value,
        lambda_b: bf.lambda,
        posterior_null: bf.posterior_null,
        rejected: p_value <= 1.0 - confidence,
        posterior_met: bf.posterior_null >= posterior_target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_witness() {
        let w = lindley_search(0.95, 0.95, 100, 1.0).unwrap();
        assert!(w.rejected && w.posterior_met);
        assert!(w.p_value <= 0.0455);
        assert!(w.r_min > 1.9e4 && w.r_min < 2.1e4, "{}", w.r_min);
        assert!((w.tau - 14.0).abs() < 0.3);
    }

    #[test]
    fn even_odds_target() {
        let w = lindley_search(0.95, 0.5, 100, 1.0).unwrap();
        assert!(w.posterior_met);
        assert!(lambda_at(w.z, w.r_min).abs() < 1e-9);
        assert!(w.r_min > 40.0 && w.r_min < 60.0);
    }

    #[test]
    fn rejects_out_of_range_targets() {
        assert!(lindley_search(0.95, 1.0, 10, 1.0).is_err());
        assert!(lindley_search(0.95, 0.4, 10, 1.0).is_err());
        assert!(lindley_search(1.0, 0.9, 10, 1.0).is_err());
    }
}
