use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{SampleSet, Summary};
use crate::rng::StreamRng;
use crate::stats::SuffStats;

fn check(mu: &[f64], sigma: f64) -> Result<()> {
    if mu.is_empty() {
        return Err(Error::invalid("mu", "need at least one coordinate"));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid("sigma", format!("must be finite and > 0, got {sigma}")));
    }
    Ok(())
}

/// `n` iid rows from `N(mu, sigma^2 I)`.
pub fn generate_dataset(mu: &[f64], sigma: f64, n: usize, rng: &mut StreamRng) -> Result<SampleSet> {
    check(mu, sigma)?;
    let mut data = Vec::with_capacity(n * mu.len());
    for _ in 0..n {
        for &m in mu {
            let z: f64 = rng.sample(StandardNormal);
            data.push(m + sigma * z);
        }
    }
    SampleSet::from_flat(data, mu.len(), sigma)
}

/// Sufficient statistics of `n` iid rows drawn directly: each mean is
/// `N(mu_k, sigma^2 / n)` and each sum of squares is `sigma^2 chi2_{n-1}`,
/// independently. Same law as summarizing [`generate_dataset`], at O(D) cost.
pub fn sample_stats(mu: &[f64], sigma: f64, n: usize, rng: &mut StreamRng) -> Result<SuffStats> {
    check(mu, sigma)?;
    if n == 0 {
        return Ok(SuffStats::empty(mu.len()));
    }
    let nf = n as f64;
    let chi = if n >= 2 {
        Some(ChiSquared::new(nf - 1.0).map_err(|e| Error::invalid("n", e.to_string()))?)
    } else {
        None
    };
    let mut mean = Vec::with_capacity(mu.len());
    let mut sse = Vec::with_capacity(mu.len());
    for &m in mu {
        let z: f64 = rng.sample(StandardNormal);
        mean.push(m + sigma * z / nf.sqrt());
        sse.push(chi.as_ref().map_or(0.0, |c| sigma * sigma * c.sample(rng)));
    }
    Ok(SuffStats::from_parts(n, mean, sse))
}

pub fn sample_summary(mu: &[f64], sigma: f64, n: usize, rng: &mut StreamRng) -> Result<Summary> {
    Summary::new(sample_stats(mu, sigma, n, rng)?, sigma)
}

/// One observation from `N(mu, sigma^2 I)`.
pub fn sample_row(mu: &[f64], sigma: f64, rng: &mut StreamRng) -> Vec<f64> {
    mu.iter()
        .map(|&m| {
            let z: f64 = rng.sample(StandardNormal);
            m + sigma * z
        })
        .collect()
}

/// Runs `f(0..count)` on a pool of `workers` threads (`None`: rayon's
/// default) and returns the results in index order.
pub fn run_indexed<T, F>(workers: Option<usize>, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::invalid("workers", "must be >= 1"));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid("workers", e.to_string()))?;
    pool.install(|| (0..count).into_par_iter().map(f).collect())
}
