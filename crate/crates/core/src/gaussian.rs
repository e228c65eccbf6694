//! Exact conjugate normal-normal kernel with known isotropic noise.
//!
//! A [`GaussianModel`] has `K` free mean coordinates (the first `K` columns of
//! the data) and `J` coordinates pinned at a reference point. Free coordinates
//! carry an independent zero-centered normal prior of scale `tau`, or the
//! improper flat prior. All informations are in nats (`h = -ln q`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::SuffStats;

/// Sufficient statistics together with the known noise scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    stats: SuffStats,
    sigma: f64,
}

impl Summary {
    pub fn new(stats: SuffStats, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(Self { stats, sigma })
    }

    pub fn stats(&self) -> &SuffStats {
        &self.stats
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n(&self) -> usize {
        self.stats.n()
    }

    pub fn dim(&self) -> usize {
        self.stats.dim()
    }

    /// Standard error of the mean, `sigma / sqrt(N)`.
    pub fn sigma_mu(&self) -> f64 {
        self.sigma / (self.stats.n() as f64).sqrt()
    }

    fn with_stats(&self, stats: SuffStats) -> Summary {
        Summary {
            stats,
            sigma: self.sigma,
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid("sigma", format!("must be finite and > 0, got {sigma}")));
    }
    Ok(())
}

/// Observations (rows) with a known per-coordinate noise scale.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    data: Vec<f64>,
    summary: Summary,
}

impl SampleSet {
    /// Builds from a row-major buffer of `N * dim` values.
    pub fn from_flat(data: Vec<f64>, dim: usize, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        if dim == 0 {
            return Err(Error::invalid("dim", "data must have at least one coordinate"));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::invalid(
                "data",
                format!("{} values do not form rows of {dim}", data.len()),
            ));
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::invalid("data", format!("non-finite value {x}")));
        }
        let stats = SuffStats::from_rows(&data, dim);
        Ok(Self {
            data,
            summary: Summary { stats, sigma },
        })
    }

    /// One-dimensional sample set.
    pub fn scalar(values: &[f64], sigma: f64) -> Result<Self> {
        Self::from_flat(values.to_vec(), 1, sigma)
    }

    pub fn from_rows(rows: &[Vec<f64>], sigma: f64) -> Result<Self> {
        let dim = rows.first().map_or(1, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("data", "rows have differing lengths"));
        }
        Self::from_flat(rows.concat(), dim, sigma)
    }

    pub fn summary(&self) -> &Summary {
        &self.summary
    }

    pub fn stats(&self) -> &SuffStats {
        &self.summary.stats
    }

    pub fn sigma(&self) -> f64 {
        self.summary.sigma
    }

    pub fn n(&self) -> usize {
        self.summary.n()
    }

    pub fn dim(&self) -> usize {
        self.summary.dim()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.data[i * d..(i + 1) * d]
    }

    pub fn push(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                data: row.len(),
                model: self.dim(),
            });
        }
        self.data.extend_from_slice(row);
        self.summary.stats.push(row);
        Ok(())
    }

    /// Removes the last observation.
    pub fn pop(&mut self) -> Option<Vec<f64>> {
        if self.n() == 0 {
            return None;
        }
        let d = self.dim();
        let row = self.data.split_off(self.data.len() - d);
        self.summary.stats.remove(&row);
        Some(row)
    }

    /// Summary of the rows at `indices`.
    pub fn subset_summary(&self, indices: &[usize]) -> Summary {
        self.summary
            .with_stats(SuffStats::from_indexed_rows(&self.data, self.dim(), indices))
    }

    /// Means of adjacent pairs with `sigma / sqrt(2)`; a trailing odd row is dropped.
    pub fn pair_binned(&self) -> SampleSet {
        let d = self.dim();
        let pairs = self.n() / 2;
        let mut binned = Vec::with_capacity(pairs * d);
        for p in 0..pairs {
            let (a, b) = (self.row(2 * p), self.row(2 * p + 1));
            binned.extend(a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)));
        }
        SampleSet::from_flat(binned, d, self.sigma() / 2f64.sqrt())
            .expect("binning preserves validity")
    }
}

/// Nested location model: `free_dims` free coordinates followed by pinned ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianModel {
    free_dims: usize,
    fixed_reference: Vec<f64>,
}

impl GaussianModel {
    pub fn new(free_dims: usize, fixed_reference: Vec<f64>) -> Result<Self> {
        if let Some(x) = fixed_reference.iter().find(|x| !x.is_finite()) {
            return Err(Error::invalid("fixed_reference", format!("non-finite value {x}")));
        }
        Ok(Self {
            free_dims,
            fixed_reference,
        })
    }

    /// All `dim` coordinates pinned at zero.
    pub fn null(dim: usize) -> Self {
        Self {
            free_dims: 0,
            fixed_reference: vec![0.0; dim],
        }
    }

    /// First `free` of `dim` coordinates free, the rest pinned at zero.
    pub fn nested(free: usize, dim: usize) -> Self {
        assert!(free <= dim);
        Self {
            free_dims: free,
            fixed_reference: vec![0.0; dim - free],
        }
    }

    pub fn free_dims(&self) -> usize {
        self.free_dims
    }

    pub fn fixed_dims(&self) -> usize {
        self.fixed_reference.len()
    }

    pub fn dim(&self) -> usize {
        self.free_dims + self.fixed_reference.len()
    }

    pub fn fixed_reference(&self) -> &[f64] {
        &self.fixed_reference
    }

    pub(crate) fn check(&self, summary: &Summary) -> Result<()> {
        if summary.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                data: summary.dim(),
                model: self.dim(),
            });
        }
        Ok(())
    }
}

/// Prior on each free coordinate: `N(0, tau^2)` or the improper flat limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorSpec {
    Normal { tau: f64 },
    ImproperFlat,
}

impl PriorSpec {
    pub fn normal(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::invalid("tau", format!("must be finite and > 0, got {tau}")));
        }
        Ok(PriorSpec::Normal { tau })
    }

    pub fn tau(&self) -> Option<f64> {
        match *self {
            PriorSpec::Normal { tau } => Some(tau),
            PriorSpec::ImproperFlat => None,
        }
    }

    pub fn is_proper(&self) -> bool {
        matches!(self, PriorSpec::Normal { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSpec {
    /// Posterior mean of each free coordinate.
    pub mean: Vec<f64>,
    /// Posterior standard deviation, shared by all free coordinates.
    pub sd: f64,
}

pub(crate) fn ln_2pi_var(sigma: f64) -> f64 {
    (2.0 * PI * sigma * sigma).ln()
}

/// `-ln` likelihood of one pinned coordinate at `center`.
fn pinned_information(stats: &SuffStats, k: usize, center: f64, sigma: f64) -> f64 {
    let n = stats.n() as f64;
    0.5 * n * ln_2pi_var(sigma) + stats.sse_about(k, center) / (2.0 * sigma * sigma)
}

fn pinned_total(summary: &Summary, model: &GaussianModel) -> f64 {
    let k0 = model.free_dims();
    model
        .fixed_reference()
        .iter()
        .enumerate()
        .map(|(j, &c)| pinned_information(summary.stats(), k0 + j, c, summary.sigma()))
        .sum()
}

/// Information of one free coordinate under the `N(0, tau^2)` prior.
fn free_evidence_information(stats: &SuffStats, k: usize, sigma: f64, tau: f64) -> f64 {
    let n = stats.n();
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let s2 = sigma * sigma;
    let r = nf * tau * tau / s2;
    let m = stats.mean()[k];
    0.5 * nf * ln_2pi_var(sigma)
        + stats.sse()[k] / (2.0 * s2)
        + 0.5 * r.ln_1p()
        + m * m / (2.0 * (s2 / nf + tau * tau))
}

/// `h(x^N | theta_hat)`: information at the maximum-likelihood estimate.
pub fn mle_information(summary: &Summary, model: &GaussianModel) -> Result<f64> {
    model.check(summary)?;
    if summary.n() == 0 {
        return Err(Error::invalid("samples", "maximum likelihood needs N >= 1"));
    }
    let s2 = summary.sigma() * summary.sigma();
    let n = summary.n() as f64;
    let free: f64 = summary.stats().sse()[..model.free_dims()]
        .iter()
        .map(|&sse| 0.5 * n * ln_2pi_var(summary.sigma()) + sse / (2.0 * s2))
        .sum();
    Ok(free + pinned_total(summary, model))
}

/// `h(x^N | theta)` at an arbitrary full parameter vector (free coordinates
/// first, then pinned ones taken from the model).
pub fn information_at(summary: &Summary, model: &GaussianModel, free_params: &[f64]) -> Result<f64> {
    model.check(summary)?;
    if free_params.len() != model.free_dims() {
        return Err(Error::DimensionMismatch {
            data: free_params.len(),
            model: model.free_dims(),
        });
    }
    let free: f64 = free_params
        .iter()
        .enumerate()
        .map(|(k, &c)| pinned_information(summary.stats(), k, c, summary.sigma()))
        .sum();
    Ok(free + pinned_total(summary, model))
}

/// `ln q(x^N)`, the exact log marginal likelihood. Defined as 0 for `N = 0`.
pub fn log_evidence(summary: &Summary, model: &GaussianModel, prior: &PriorSpec) -> Result<f64> {
    evidence_information(summary, model, prior).map(|h| -h)
}

/// `h(x^N) = -ln q(x^N)`.
pub fn evidence_information(summary: &Summary, model: &GaussianModel, prior: &PriorSpec) -> Result<f64> {
    model.check(summary)?;
    let free = if model.free_dims() == 0 {
        0.0
    } else {
        let tau = prior.tau().ok_or(Error::ImproperPrior {
            quantity: "marginal likelihood",
        })?;
        (0..model.free_dims())
            .map(|k| free_evidence_information(summary.stats(), k, summary.sigma(), tau))
            .sum()
    };
    Ok(free + pinned_total(summary, model))
}

/// Conjugate posterior of the free coordinates.
pub fn posterior(summary: &Summary, model: &GaussianModel, prior: &PriorSpec) -> Result<PosteriorSpec> {
    model.check(summary)?;
    let k = model.free_dims();
    let n = summary.n() as f64;
    let s2 = summary.sigma() * summary.sigma();
    let means = &summary.stats().mean()[..k];
    match *prior {
        PriorSpec::ImproperFlat => {
            if summary.n() == 0 {
                return Err(Error::ImproperPrior {
                    quantity: "posterior without data",
                });
            }
            Ok(PosteriorSpec {
                mean: means.to_vec(),
                sd: summary.sigma() / n.sqrt(),
            })
        }
        PriorSpec::Normal { tau } => {
            let precision = 1.0 / (tau * tau) + n / s2;
            // shrinkage factor n tau^2 / (sigma^2 + n tau^2), written to stay exact at n = 0
            let shrink = n * tau * tau / (s2 + n * tau * tau);
            Ok(PosteriorSpec {
                mean: means.iter().map(|m| shrink * m).collect(),
                sd: precision.sqrt().recip(),
            })
        }
    }
}

/// `h(x^{N_G} | x^{N_T})` where `train` holds the statistics of the training
/// rows, a subset of the rows summarized by `full`.
pub fn predictive_information_split(
    full: &Summary,
    train: &SuffStats,
    model: &GaussianModel,
    prior: &PriorSpec,
) -> Result<f64> {
    model.check(full)?;
    if train.dim() != full.dim() {
        return Err(Error::DimensionMismatch {
            data: train.dim(),
            model: full.dim(),
        });
    }
    let (n, nt) = (full.n(), train.n());
    if nt >= n {
        return Err(Error::EmptyGeneralizationSet);
    }
    let sigma = full.sigma();
    let s2 = sigma * sigma;
    let ng = (n - nt) as f64;
    let full_stats = full.stats();

    let pinned: f64 = model
        .fixed_reference()
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let k = model.free_dims() + j;
            0.5 * ng * ln_2pi_var(sigma)
                + (full_stats.sse_about(k, c) - train.sse_about(k, c)) / (2.0 * s2)
        })
        .sum();

    let free: f64 = match *prior {
        PriorSpec::ImproperFlat => {
            if model.free_dims() > 0 && nt == 0 {
                return Err(Error::ImproperPrior {
                    quantity: "predictive information with an empty training set",
                });
            }
            let log_ratio = 0.5 * (n as f64 / nt as f64).ln();
            (0..model.free_dims())
                .map(|k| {
                    0.5 * ng * ln_2pi_var(sigma)
                        + (full_stats.sse()[k] - train.sse()[k]) / (2.0 * s2)
                        + log_ratio
                })
                .sum()
        }
        PriorSpec::Normal { tau } => (0..model.free_dims())
            .map(|k| {
                free_evidence_information(full_stats, k, sigma, tau)
                    - free_evidence_information(train, k, sigma, tau)
            })
            .sum(),
    };
    Ok(free + pinned)
}

/// `h(x^{N_G} | x^{N_T})` with the training rows given by index and the
/// generalization set being every other row.
pub fn predictive_information(
    full: &SampleSet,
    training: &[usize],
    model: &GaussianModel,
    prior: &PriorSpec,
) -> Result<f64> {
    let mut seen = vec![false; full.n()];
    for &i in training {
        if i >= full.n() {
            return Err(Error::invalid("training", format!("row index {i} out of range")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::invalid("training", format!("row index {i} repeated")));
        }
    }
    let train = full.subset_summary(training);
    predictive_information_split(full.summary(), train.stats(), model, prior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

    #[test]
    fn mle_information_examples() {
        let s = SampleSet::scalar(&[0.0, 0.0], 1.0).unwrap();
        let h = mle_information(s.summary(), &GaussianModel::nested(1, 1)).unwrap();
        assert_relative_eq!(h, (2.0 * PI).ln(), epsilon = 1e-14);

        let s = SampleSet::scalar(&[0.0], 1.0).unwrap();
        let h = mle_information(s.summary(), &GaussianModel::null(1)).unwrap();
        assert_relative_eq!(h, HALF_LN_2PI, epsilon = 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = SampleSet::scalar(&[1.0, 2.0], 1.0).unwrap();
        let err = mle_information(s.summary(), &GaussianModel::nested(1, 2)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { data: 1, model: 2 }));
    }

    #[test]
    fn evidence_single_point() {
        let s = SampleSet::scalar(&[0.0], 1.0).unwrap();
        let prior = PriorSpec::normal(1.0).unwrap();
        let lq = log_evidence(s.summary(), &GaussianModel::nested(1, 1), &prior).unwrap();
        assert_relative_eq!(lq, -0.5 * (4.0 * PI).ln(), epsilon = 1e-14);
    }

    #[test]
    fn parameter_free_evidence_is_likelihood() {
        let s = SampleSet::scalar(&[0.4, -1.1, 2.5], 0.7).unwrap();
        let m = GaussianModel::new(0, vec![0.3]).unwrap();
        let lq = log_evidence(s.summary(), &m, &PriorSpec::ImproperFlat).unwrap();
        let h = mle_information(s.summary(), &m).unwrap();
        assert_eq!(lq, -h);
    }

    #[test]
    fn improper_evidence_fails() {
        let s = SampleSet::scalar(&[0.4], 1.0).unwrap();
        let err = log_evidence(s.summary(), &GaussianModel::nested(1, 1), &PriorSpec::ImproperFlat)
            .unwrap_err();
        assert!(matches!(err, Error::ImproperPrior { .. }));
        assert!(err.is_numeric_domain());
    }

    #[test]
    fn posterior_examples() {
        let m = GaussianModel::nested(1, 1);
        let empty = SampleSet::scalar(&[], 1.0).unwrap();
        let p = posterior(empty.summary(), &m, &PriorSpec::normal(2.0).unwrap()).unwrap();
        assert_eq!(p.mean, vec![0.0]);
        assert_relative_eq!(p.sd, 2.0, epsilon = 1e-15);

        let s = SampleSet::scalar(&[1.0, 3.0], 1.0).unwrap();
        let p = posterior(s.summary(), &m, &PriorSpec::ImproperFlat).unwrap();
        assert_relative_eq!(p.mean[0], 2.0);
        assert_relative_eq!(p.sd, 0.5f64.sqrt(), epsilon = 1e-15);

        // prior precision equal to data precision halves the mean
        let s = SampleSet::scalar(&[1.0, 2.0, 4.5, 0.5], 2.0).unwrap();
        let tau = 2.0 / 2.0;
        let p = posterior(s.summary(), &m, &PriorSpec::normal(tau).unwrap()).unwrap();
        assert_relative_eq!(p.mean[0], s.stats().mean()[0] / 2.0, epsilon = 1e-14);

        let err = posterior(empty.summary(), &m, &PriorSpec::ImproperFlat).unwrap_err();
        assert!(matches!(err, Error::ImproperPrior { .. }));
    }

    #[test]
    fn posterior_flat_limit() {
        let s = SampleSet::scalar(&[0.3, 1.9, -0.4, 2.2, 1.1], 1.3).unwrap();
        let m = GaussianModel::nested(1, 1);
        let p = posterior(s.summary(), &m, &PriorSpec::normal(1e6 * 1.3).unwrap()).unwrap();
        let tol = 1e-10 * s.summary().sigma_mu();
        assert!((p.mean[0] - s.stats().mean()[0]).abs() <= tol);
    }

    #[test]
    fn posterior_sd_decreases_with_n() {
        let m = GaussianModel::nested(1, 1);
        let prior = PriorSpec::normal(3.0).unwrap();
        let mut s = SampleSet::scalar(&[], 1.0).unwrap();
        let mut last = f64::INFINITY;
        for i in 0..20 {
            let sd = posterior(s.summary(), &m, &prior).unwrap().sd;
            assert!(sd < last);
            last = sd;
            s.push(&[i as f64 * 0.1]).unwrap();
        }
    }

    #[test]
    fn predictive_with_empty_training_is_evidence() {
        let s = SampleSet::scalar(&[0.5, -0.2, 1.4], 1.0).unwrap();
        let m = GaussianModel::nested(1, 1);
        let prior = PriorSpec::normal(2.0).unwrap();
        let h = predictive_information(&s, &[], &m, &prior).unwrap();
        let full = evidence_information(s.summary(), &m, &prior).unwrap();
        assert_relative_eq!(h, full, epsilon = 1e-13);
    }

    #[test]
    fn predictive_errors() {
        let s = SampleSet::scalar(&[0.5, -0.2], 1.0).unwrap();
        let m = GaussianModel::nested(1, 1);
        let err = predictive_information(&s, &[0, 1], &m, &PriorSpec::normal(1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::EmptyGeneralizationSet));
        let err = predictive_information(&s, &[], &m, &PriorSpec::ImproperFlat).unwrap_err();
        assert!(matches!(err, Error::ImproperPrior { .. }));
        let err = predictive_information(&s, &[1, 1], &m, &PriorSpec::ImproperFlat).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { .. }));
    }

    #[test]
    fn pair_binning_keeps_mean_and_standard_error() {
        let s = SampleSet::scalar(&[0.1, 0.7, -0.3, 1.2, 2.0, 0.4], 1.0).unwrap();
        let b = s.pair_binned();
        assert_eq!(b.n(), 3);
        assert_relative_eq!(b.stats().mean()[0], s.stats().mean()[0], epsilon = 1e-15);
        assert_relative_eq!(b.summary().sigma_mu(), s.summary().sigma_mu(), epsilon = 1e-15);
    }
}
