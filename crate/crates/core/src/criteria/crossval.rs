//! Leave-k-out cross-entropy estimates and pseudo-Bayes factors.
//!
//! `H_hat^{N_G|N_T} = (N / N_G) * mean over subsets G of h(x^G | x^{rest})`.
//! Every size-`N_G` subset is used when there are at most `budget` of them;
//! otherwise `budget` distinct subsets are drawn uniformly from the seed before
//! any evaluation starts, so results do not depend on the thread count.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{predictive_information_split, GaussianModel, PriorSpec, SampleSet, Summary};
use crate::rng;
use crate::stats::{CompensatedSum, SuffStats};

use super::{CriterionId, CriterionReport, Partition};

/// Exhaustive enumeration cutoff used by the CLI and the simulations.
pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossEntropyEstimate {
    pub value: f64,
    pub partition: Partition,
    pub subsets: usize,
    pub exhaustive: bool,
    pub budget: usize,
    pub seed: u64,
}

impl CrossEntropyEstimate {
    pub fn to_report(&self, model_id: &str, free_dims: usize) -> CriterionReport {
        let mut r = CriterionReport::new(CriterionId::PseudoBfTerm, model_id, free_dims, self.value)
            .with_partition(self.partition);
        r.budget = Some(self.budget);
        r.seed = Some(self.seed);
        r.exhaustive = Some(self.exhaustive);
        r
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All size-`k` subsets of `0..n` in lexicographic order.
fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `count` distinct uniformly random size-`k` subsets (Floyd's algorithm).
fn sampled_subsets(n: usize, k: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = rng::stream(seed, &[rng::tag("leave-k-out"), n as u64, k as u64]);
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut chosen = HashSet::with_capacity(k);
        for j in (n - k)..n {
            let t = rng.random_range(0..=j);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        let mut subset: Vec<usize> = chosen.into_iter().collect();
        subset.sort_unstable();
        if seen.insert(subset.clone()) {
            out.push(subset);
        }
    }
    out
}

/// The generalization subsets the estimator averages over, and whether the
/// list is exhaustive.
pub fn generalization_subsets(n: usize, n_gen: usize, budget: usize, seed: u64) -> Result<(Vec<Vec<usize>>, bool)> {
    if budget < 1 {
        return Err(Error::invalid("budget", "must be at least 1"));
    }
    if n_gen == 0 || n_gen > n {
        return Err(Error::invalid("n_gen", format!("must be in 1..={n}, got {n_gen}")));
    }
    let total = binomial(n, n_gen);
    if total <= budget as u128 {
        Ok((all_subsets(n, n_gen), true))
    } else {
        Ok((sampled_subsets(n, n_gen, budget, seed), false))
    }
}

fn training_stats(samples: &SampleSet, gen: &[usize]) -> SuffStats {
    let n = samples.n();
    if gen.len() <= n - gen.len() {
        let g = SuffStats::from_indexed_rows(samples.data(), samples.dim(), gen);
        samples.stats().without(&g)
    } else {
        let mut in_gen = vec![false; n];
        for &i in gen {
            in_gen[i] = true;
        }
        let train: Vec<usize> = (0..n).filter(|&i| !in_gen[i]).collect();
        SuffStats::from_indexed_rows(samples.data(), samples.dim(), &train)
    }
}

fn average_over(
    samples: &SampleSet,
    subsets: &[Vec<usize>],
    model: &GaussianModel,
    prior: &PriorSpec,
) -> Result<f64> {
    let terms: Vec<f64> = subsets
        .par_iter()
        .map(|gen| {
            let train = training_stats(samples, gen);
            predictive_information_split(samples.summary(), &train, model, prior)
        })
        .collect::<Result<_>>()?;
    let total: CompensatedSum = terms.into_iter().collect();
    Ok(total.value() / subsets.len() as f64)
}

fn check_inputs(samples: &SampleSet, model: &GaussianModel, prior: &PriorSpec, partition: Partition) -> Result<()> {
    partition.check_n(samples.n())?;
    model.check(samples.summary())?;
    if partition.n_train() == 0 && model.free_dims() > 0 && !prior.is_proper() {
        return Err(Error::ImproperPrior {
            quantity: "cross entropy with an empty training set",
        });
    }
    Ok(())
}

/// Leave-k-out estimate of the cross entropy `H^{N_G|N_T}`.
pub fn leave_k_out_cross_entropy(
    samples: &SampleSet,
    model: &GaussianModel,
    prior: &PriorSpec,
    partition: Partition,
    budget: usize,
    seed: u64,
) -> Result<CrossEntropyEstimate> {
    check_inputs(samples, model, prior, partition)?;
    let (subsets, exhaustive) = generalization_subsets(samples.n(), partition.n_gen(), budget, seed)?;
    let mean = average_over(samples, &subsets, model, prior)?;
    let scale = samples.n() as f64 / partition.n_gen() as f64;
    Ok(CrossEntropyEstimate {
        value: scale * mean,
        partition,
        subsets: subsets.len(),
        exhaustive,
        budget,
        seed,
    })
}

/// Closed-form leave-one-out estimate `H_hat^{1|N-1} = sum_i h(x_i | x^{-i})`
/// from sufficient statistics alone.
///
/// With `c` the posterior shrinkage of the training sum and `v` the predictive
/// variance, the residual of point `i` is `(1 + c) x_i - c N xbar`, whose sum of
/// squares is `N xbar^2 (1 + c - cN)^2 + (1 + c)^2 sse`.
pub fn loo_cross_entropy(summary: &Summary, model: &GaussianModel, prior: &PriorSpec) -> Result<f64> {
    model.check(summary)?;
    let n = summary.n();
    if n == 0 {
        return Err(Error::invalid("samples", "leave-one-out needs N >= 1"));
    }
    let nf = n as f64;
    let sigma = summary.sigma();
    let s2 = sigma * sigma;
    let stats = summary.stats();

    let pinned: f64 = model
        .fixed_reference()
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            0.5 * nf * crate::gaussian::ln_2pi_var(sigma)
                + stats.sse_about(model.free_dims() + j, c) / (2.0 * s2)
        })
        .sum();
    if model.free_dims() == 0 {
        return Ok(pinned);
    }

    let nt = nf - 1.0;
    let (c, v) = match *prior {
        PriorSpec::ImproperFlat => {
            if n == 1 {
                return Err(Error::ImproperPrior {
                    quantity: "leave-one-out cross entropy with one observation",
                });
            }
            (1.0 / nt, s2 * nf / nt)
        }
        PriorSpec::Normal { tau } => {
            let precision = 1.0 / (tau * tau) + nt / s2;
            (1.0 / (s2 * precision), s2 + 1.0 / precision)
        }
    };
    let free: f64 = (0..model.free_dims())
        .map(|k| {
            let m = stats.mean()[k];
            let a = 1.0 + c - c * nf;
            let sq = nf * m * m * a * a + (1.0 + c) * (1.0 + c) * stats.sse()[k];
            0.5 * nf * (2.0 * std::f64::consts::PI * v).ln() + sq / (2.0 * v)
        })
        .sum();
    Ok(free + pinned)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoBayesFactor {
    /// `lambda_PB = H_hat_0 - H_hat_1`; negative values select model zero.
    pub lambda: f64,
    pub model0: CrossEntropyEstimate,
    pub model1: CrossEntropyEstimate,
}

impl PseudoBayesFactor {
    pub fn selects_model_zero(&self) -> bool {
        self.lambda < 0.0
    }
}

/// Both models are scored on the same generalization subsets.
#[allow(clippy::too_many_arguments)]
pub fn pseudo_bayes_factor(
    samples: &SampleSet,
    model0: &GaussianModel,
    model1: &GaussianModel,
    prior0: &PriorSpec,
    prior1: &PriorSpec,
    partition: Partition,
    budget: usize,
    seed: u64,
) -> Result<PseudoBayesFactor> {
    let h0 = leave_k_out_cross_entropy(samples, model0, prior0, partition, budget, seed)?;
    let h1 = leave_k_out_cross_entropy(samples, model1, prior1, partition, budget, seed)?;
    Ok(PseudoBayesFactor {
        lambda: h0.value - h1.value,
        model0: h0,
        model1: h1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::evidence_information;
    use approx::assert_relative_eq;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(100, 50), 100_891_344_545_564_193_334_812_497_256);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(10_000, 5_000), u128::MAX);
    }

    #[test]
    fn enumeration_is_complete() {
        let subsets = all_subsets(6, 3);
        assert_eq!(subsets.len(), 20);
        let unique: HashSet<_> = subsets.iter().cloned().collect();
        assert_eq!(unique.len(), 20);
        assert_eq!(subsets[0], vec![0, 1, 2]);
        assert_eq!(subsets[19], vec![3, 4, 5]);
    }

    #[test]
    fn sampling_is_distinct_and_seeded() {
        let (a, exhaustive) = generalization_subsets(30, 10, 500, 9).unwrap();
        assert!(!exhaustive);
        let (b, _) = generalization_subsets(30, 10, 500, 9).unwrap();
        assert_eq!(a, b);
        let unique: HashSet<_> = a.iter().cloned().collect();
        assert_eq!(unique.len(), 500);
        assert!(a.iter().all(|s| s.len() == 10 && s.windows(2).all(|w| w[0] < w[1])));
        assert!(generalization_subsets(30, 10, 0, 9).is_err());
    }

    #[test]
    fn whole_sample_generalization_is_evidence() {
        let s = SampleSet::scalar(&[0.4, -0.3, 1.8, 0.2], 1.0).unwrap();
        let m = GaussianModel::nested(1, 1);
        let p = PriorSpec::normal(2.0).unwrap();
        let est = leave_k_out_cross_entropy(&s, &m, &p, Partition::postdictive(4).unwrap(), 10, 1).unwrap();
        assert_eq!(est.subsets, 1);
        assert!(est.exhaustive);
        assert_relative_eq!(est.value, evidence_information(s.summary(), &m, &p).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn closed_form_loo_matches_enumeration() {
        let s = SampleSet::from_flat(vec![0.4, 1.0, -0.3, 0.2, 1.8, -1.1, 0.2, 0.5, 2.2, 0.0], 2, 0.8).unwrap();
        let m = GaussianModel::new(1, vec![0.3]).unwrap();
        for prior in [PriorSpec::ImproperFlat, PriorSpec::normal(1.7).unwrap()] {
            let enumerated =
                leave_k_out_cross_entropy(&s, &m, &prior, Partition::leave_one_out(5).unwrap(), 100, 0).unwrap();
            let closed = loo_cross_entropy(s.summary(), &m, &prior).unwrap();
            assert_relative_eq!(closed, enumerated.value, epsilon = 1e-12);
        }
    }

    #[test]
    fn improper_prior_without_training_fails() {
        let s = SampleSet::scalar(&[0.4, -0.3], 1.0).unwrap();
        let m = GaussianModel::nested(1, 1);
        let err = leave_k_out_cross_entropy(&s, &m, &PriorSpec::ImproperFlat, Partition::postdictive(2).unwrap(), 10, 0)
            .unwrap_err();
        assert!(err.is_numeric_domain());
        let err = leave_k_out_cross_entropy(&s, &m, &PriorSpec::ImproperFlat, Partition::new(1, 2).unwrap(), 10, 0)
            .unwrap_err();
        assert!(matches!(err, Error::PartitionMismatch { .. }));
    }

    #[test]
    fn identical_models_give_zero_pseudo_bf() {
        let s = SampleSet::scalar(&[0.4, -0.3, 1.8, 0.2, 0.9], 1.0).unwrap();
        let m = GaussianModel::nested(1, 1);
        let p = PriorSpec::ImproperFlat;
        let pb = pseudo_bayes_factor(&s, &m, &m, &p, &p, Partition::new(3, 2).unwrap(), 100, 4).unwrap();
        assert_eq!(pb.lambda, 0.0);
    }
}
