use crate::criteria::partition_factor;
use crate::error::{Error, Result};
use crate::special::chi2_sf;

/// Frequentist significance level implied by the `IC^nu` rule when the larger
/// model has `delta_k` extra parameters:
/// `1 - CDF[chi2_dk](dk * [1 + (1 + 1/nu) ln(1 + nu)])`.
///
/// `nu = 0` is the AIC limit; `nu = inf` gives 0.
pub fn significance_level(delta_k: usize, nu: f64) -> Result<f64> {
    if delta_k == 0 {
        return Err(Error::invalid("delta_k", "must be a positive integer"));
    }
    if nu.is_nan() || nu < 0.0 {
        return Err(Error::invalid("nu", format!("must be >= 0, got {nu}")));
    }
    let dk = delta_k as f64;
    let threshold = dk * (1.0 + partition_factor(nu));
    if threshold.is_infinite() {
        return Ok(0.0);
    }
    chi2_sf(threshold, dk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn aic_limits() {
        assert_relative_eq!(significance_level(2, 0.0).unwrap(), (-2f64).exp(), max_relative = 1e-13);
        assert_relative_eq!(significance_level(1, 0.0).unwrap(), 0.157_299_207_050_285_1, max_relative = 1e-12);
    }

    #[test]
    fn vanishes_in_postdictive_limit() {
        assert_eq!(significance_level(1, f64::INFINITY).unwrap(), 0.0);
        assert!(significance_level(1, 1e12).unwrap() < 1e-6);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(significance_level(0, 1.0).is_err());
        assert!(significance_level(1, -1.0).is_err());
    }
}
