use serde::{Deserialize, Serialize};

use crate::analysis::{missing_information_from_summary, occam_decomposition, parameter_information};
use crate::criteria::{
    aic, bic, bic_complexity, complexity_nu, generalized_ic, generalized_ic_for, leave_k_out_cross_entropy,
    loo_cross_entropy, select_model, CriterionReport, Partition,
};
use crate::error::{Error, Result};
use crate::gaussian::{
    evidence_information, ln_2pi_var, posterior, predictive_information_split, GaussianModel, PriorSpec, Summary,
};
use crate::rng::{stream, tag, StreamRng};

use super::config::ExperimentConfig;
use super::report::{Cell, Estimate, ExperimentReport};
use super::sampling::{generate_dataset, run_indexed, sample_row, sample_stats};

fn rng_for(config: &ExperimentConfig, name: &str, cell: usize, rep: usize) -> StreamRng {
    stream(config.seed, &[tag(name), cell as u64, rep as u64])
}

/// Whether every coordinate pinned by `model` has true mean zero.
pub fn truth_in_model(true_mean: &[f64], model: &GaussianModel) -> bool {
    true_mean[model.free_dims()..].iter().all(|&m| m == 0.0)
}

fn largest(models: &[GaussianModel]) -> &GaussianModel {
    models.iter().max_by_key(|m| m.free_dims()).expect("menu is nonempty")
}

fn smallest(models: &[GaussianModel]) -> &GaussianModel {
    models.iter().min_by_key(|m| m.free_dims()).expect("menu is nonempty")
}

/// Monte Carlo true cross entropy, with the analytic value when it is known.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrueCrossEntropy {
    pub partition: Partition,
    pub monte_carlo: Estimate,
    /// `E h(X^N | theta_0) + (K/2)(1 + 1/nu) ln(1 + nu)`; exact for the flat
    /// prior with the truth inside the model.
    pub analytic: Option<f64>,
}

/// `(N D / 2)(ln 2 pi sigma^2 + 1)`, the expected information at the truth.
pub fn expected_information_at_truth(n: usize, dim: usize, sigma: f64) -> f64 {
    0.5 * (n * dim) as f64 * (ln_2pi_var(sigma) + 1.0)
}

fn analytic_cross_entropy(config: &ExperimentConfig, model: &GaussianModel, partition: Partition) -> Option<f64> {
    let k = model.free_dims();
    if !truth_in_model(&config.true_mean, model) || (k > 0 && config.tau.is_some()) {
        return None;
    }
    let base = expected_information_at_truth(partition.n(), config.dim(), config.sigma);
    if k == 0 {
        return Some(base);
    }
    let nu = partition.nu();
    complexity_nu(k, nu).ok().map(|c| base + c - 0.5 * k as f64)
}

/// One draw of `(N / N_G) h(X^{N_G} | X^{N_T})` with fresh data, given the
/// training statistics.
fn fresh_predictive(
    config: &ExperimentConfig,
    model: &GaussianModel,
    prior: &PriorSpec,
    partition: Partition,
    train: &crate::stats::SuffStats,
    rng: &mut StreamRng,
) -> Result<f64> {
    let gen = sample_stats(&config.true_mean, config.sigma, partition.n_gen(), rng)?;
    let full = Summary::new(train.merge(&gen), config.sigma)?;
    let h = predictive_information_split(&full, train, model, prior)?;
    Ok(h * partition.n() as f64 / partition.n_gen() as f64)
}

/// `H^{N_G|N_T}` by simulation: `(N / N_G) E h(X^{N_G} | X^{N_T})`.
pub fn true_cross_entropy(
    config: &ExperimentConfig,
    model: &GaussianModel,
    partition: Partition,
    workers: Option<usize>,
) -> Result<TrueCrossEntropy> {
    config.validate()?;
    let prior = config.prior()?;
    let cell = partition.n_train() * 1_000_003 + partition.n_gen() * 131 + model.free_dims();
    let values = run_indexed(workers, config.replicates, |rep| {
        let mut rng = rng_for(config, "true-cross-entropy", cell, rep);
        let train = sample_stats(&config.true_mean, config.sigma, partition.n_train(), &mut rng)?;
        fresh_predictive(config, model, &prior, partition, &train, &mut rng)
    })?;
    Ok(TrueCrossEntropy {
        partition,
        monte_carlo: Estimate::from_values(&values),
        analytic: analytic_cross_entropy(config, model, partition),
    })
}

/// Cross entropy on every `(N, nu, K)` cell.
pub fn cross_entropy_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    config.validate()?;
    let mut report = ExperimentReport::new(config);
    for n in config.sample_sizes()? {
        for &nu in config.nu_grid.points() {
            for model in config.menu() {
                let partition = Partition::from_nu(nu, n)?;
                let t = true_cross_entropy(config, &model, partition, workers)?;
                let mut cell = Cell::new(n);
                cell.nu = Some(nu);
                cell.free_dims = Some(model.free_dims());
                cell.partition = Some(partition);
                cell.put("true_h", t.monte_carlo);
                if let Some(a) = t.analytic {
                    cell.values.insert("analytic".into(), a);
                    cell.values.insert("z".into(), t.monte_carlo.z(a));
                }
                report.cells.push(cell);
            }
        }
    }
    Ok(report)
}

/// Mean `IC^nu` against the true cross entropy at the realized partition.
///
/// Each replicate draws a training block, a held-in block completing the
/// dataset, and a fresh generalization block. `IC^nu` is computed on the
/// dataset and the predictive information on training plus fresh block; the
/// paired difference has mean zero when the criterion is unbiased.
pub fn unbiasedness_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    config.validate()?;
    let prior = config.prior()?;
    let mut report = ExperimentReport::new(config);
    let mut cell_index = 0;
    let mut worst_z: f64 = 0.0;
    for n in config.sample_sizes()? {
        for &nu in config.nu_grid.points() {
            let partition = Partition::from_nu(nu, n)?;
            for model in config.menu() {
                cell_index += 1;
                let ci = cell_index;
                let rows = run_indexed(workers, config.replicates, |rep| {
                    let mut rng = rng_for(config, "unbiasedness", ci, rep);
                    let train = sample_stats(&config.true_mean, config.sigma, partition.n_train(), &mut rng)?;
                    let rest = sample_stats(&config.true_mean, config.sigma, partition.n_gen(), &mut rng)?;
                    let data = Summary::new(train.merge(&rest), config.sigma)?;
                    let ic = generalized_ic_for(&data, &model, "m", partition)?.value;
                    let h = fresh_predictive(config, &model, &prior, partition, &train, &mut rng)?;
                    Ok([ic, h, ic - h])
                })?;
                let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
                let mut cell = Cell::new(n);
                cell.nu = Some(nu);
                cell.free_dims = Some(model.free_dims());
                cell.partition = Some(partition);
                cell.put_values("ic", &col(0));
                cell.put_values("true_h", &col(1));
                let diff = Estimate::from_values(&col(2));
                cell.put("ic_minus_true", diff);
                let z = if diff.se > 0.0 { diff.mean / diff.se } else { 0.0 };
                cell.values.insert("realized_nu".into(), partition.nu());
                cell.values.insert("z".into(), z);
                worst_z = worst_z.max(z.abs());
                if let Some(a) = analytic_cross_entropy(config, &model, partition) {
                    cell.values.insert("analytic".into(), a);
                }

                if config.lko_replicates > 0 && partition.n_train() > 0 {
                    let lko = run_indexed(workers, config.lko_replicates, |rep| {
                        let mut rng = rng_for(config, "unbiasedness-lko", ci, rep);
                        let data = generate_dataset(&config.true_mean, config.sigma, n, &mut rng)?;
                        let sub_seed = config.seed ^ (ci as u64).rotate_left(32) ^ rep as u64;
                        let est =
                            leave_k_out_cross_entropy(&data, &model, &prior, partition, config.budget, sub_seed)?;
                        let ic = generalized_ic_for(data.summary(), &model, "m", partition)?.value;
                        Ok([est.value, ic, est.value - ic])
                    })?;
                    let col = |j: usize| lko.iter().map(|r| r[j]).collect::<Vec<_>>();
                    cell.put_values("lko", &col(0));
                    cell.put_values("ic_on_lko_data", &col(1));
                    let d = Estimate::from_values(&col(2));
                    cell.put("lko_minus_ic", d);
                    cell.values.insert("lko_z".into(), if d.se > 0.0 { d.mean / d.se } else { 0.0 });
                }
                report.cells.push(cell);
            }
        }
    }
    report.markers.insert("max_abs_z".into(), worst_z);
    report.checks.insert("all_abs_z_below_3".into(), worst_z < 3.0);
    Ok(report)
}

/// Leave-one-out against `N` times the last point's evidence increment, and
/// missing information against parameter information, for the largest model
/// in the menu.
pub fn derivative_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    config.validate()?;
    let prior = config.prior()?;
    if !prior.is_proper() {
        return Err(Error::ImproperPrior {
            quantity: "derivative experiment",
        });
    }
    let menu = config.menu();
    let model = largest(&menu);
    let mut report = ExperimentReport::new(config);
    let mut info_means = Vec::new();
    let mut worst_rel: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for (ci, n) in config.sample_sizes()?.into_iter().enumerate() {
        if n < 2 {
            return Err(Error::invalid("n_grid", "derivative experiment needs N >= 2"));
        }
        let rows = run_indexed(workers, config.replicates, |rep| {
            let mut rng = rng_for(config, "derivative", ci, rep);
            let mut stats = sample_stats(&config.true_mean, config.sigma, n - 1, &mut rng)?;
            let prefix = Summary::new(stats.clone(), config.sigma)?;
            stats.push(&sample_row(&config.true_mean, config.sigma, &mut rng));
            let full = Summary::new(stats, config.sigma)?;
            let h_full = evidence_information(&full, model, &prior)?;
            let h_prefix = evidence_information(&prefix, model, &prior)?;
            let loo = loo_cross_entropy(&full, model, &prior)?;
            let info = parameter_information(&full, model, &prior)?;
            let missing = missing_information_from_summary(&full, model, &prior)?;
            Ok([loo, n as f64 * (h_full - h_prefix), info, missing, missing - info])
        })?;
        let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
        let mut cell = Cell::new(n);
        cell.free_dims = Some(model.free_dims());
        cell.put_values("loo", &col(0));
        cell.put_values("n_times_increment", &col(1));
        cell.put_values("parameter_information", &col(2));
        cell.put_values("missing_information", &col(3));
        cell.put_values("missing_minus_parameter", &col(4));
        let abs_gap: Vec<f64> = col(4).iter().map(|g| g.abs()).collect();
        cell.put_values("abs_missing_minus_parameter", &abs_gap);
        let loo = cell.estimates["loo"].mean;
        let fd = cell.estimates["n_times_increment"].mean;
        let rel = (loo - fd).abs() / loo.abs();
        cell.values.insert("relative_error".into(), rel);
        if n >= 1000 {
            worst_rel = worst_rel.max(rel);
        }
        worst_gap = worst_gap.max(cell.estimates["abs_missing_minus_parameter"].mean);
        info_means.push(cell.estimates["parameter_information"].mean);
        report.cells.push(cell);
    }
    report.markers.insert("max_relative_error_n_ge_1000".into(), worst_rel);
    report.markers.insert("max_mean_abs_missing_minus_parameter".into(), worst_gap);
    report.checks.insert("derivative_within_10_percent".into(), worst_rel <= 0.10);
    report.checks.insert("missing_within_2_nats".into(), worst_gap <= 2.0);
    report
        .checks
        .insert("parameter_information_increases".into(), info_means.windows(2).all(|w| w[1] > w[0]));
    Ok(report)
}

fn decide(reports: Vec<CriterionReport>) -> Result<usize> {
    Ok(select_model(&reports)?.free_dims)
}

/// AIC and BIC decisions on each dataset and on its pair-binned version.
pub fn binning_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    config.validate()?;
    let menu = config.menu();
    let mut report = ExperimentReport::new(config);
    let mut invariance: f64 = 0.0;
    let mut aic_flips = 0u64;
    let mut shift_err: f64 = 0.0;
    for (ci, n) in config.sample_sizes()?.into_iter().enumerate() {
        if n < 2 {
            return Err(Error::invalid("n_grid", "binning needs N >= 2"));
        }
        let rows = run_indexed(workers, config.replicates, |rep| {
            let mut rng = rng_for(config, "binning", ci, rep);
            let data = generate_dataset(&config.true_mean, config.sigma, n, &mut rng)?;
            // an odd trailing row would change the mean, so compare like with like
            let even = if n % 2 == 1 {
                let mut d = data.clone();
                d.pop();
                d
            } else {
                data
            };
            let binned = even.pair_binned();
            let (s, b) = (even.summary(), binned.summary());
            let drift = s
                .stats()
                .mean()
                .iter()
                .zip(b.stats().mean())
                .map(|(x, y)| (x - y).abs())
                .fold((s.sigma_mu() - b.sigma_mu()).abs(), f64::max);
            let pick = |sum: &Summary, f: fn(&Summary, &GaussianModel, &str) -> Result<CriterionReport>| {
                decide(menu.iter().map(|m| f(sum, m, "m")).collect::<Result<Vec<_>>>()?)
            };
            let (a0, a1) = (pick(s, aic)?, pick(b, aic)?);
            let (b0, b1) = (pick(s, bic)?, pick(b, bic)?);
            Ok([drift, (a0 != a1) as u8 as f64, (b0 != b1) as u8 as f64, b0 as f64, b1 as f64])
        })?;
        let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
        let mut cell = Cell::new(n);
        cell.put_values("aic_flip_rate", &col(1));
        cell.put_values("bic_flip_rate", &col(2));
        cell.put_values("bic_selected_k", &col(3));
        cell.put_values("bic_selected_k_binned", &col(4));
        let flips = col(1).iter().sum::<f64>() as u64;
        cell.tallies.insert("aic_flips".into(), flips);
        cell.tallies.insert("bic_flips".into(), col(2).iter().sum::<f64>() as u64);
        aic_flips += flips;
        let drift = col(0).into_iter().fold(0.0, f64::max);
        cell.values.insert("max_mean_or_sigma_mu_drift".into(), drift);
        invariance = invariance.max(drift);
        let n_even = (n - n % 2) as f64;
        for m in &menu {
            let k = m.free_dims();
            let shift = bic_complexity(k, n_even) - bic_complexity(k, n_even / 2.0);
            cell.values.insert(format!("bic_penalty_shift_k{k}"), shift);
            shift_err = shift_err.max((shift - 0.5 * k as f64 * std::f64::consts::LN_2).abs());
        }
        report.cells.push(cell);
    }
    report.markers.insert("max_invariance_drift".into(), invariance);
    report.markers.insert("max_bic_shift_error".into(), shift_err);
    report.checks.insert("aic_never_flips".into(), aic_flips == 0);
    report.checks.insert("estimates_invariant".into(), invariance <= 1e-12);
    report.checks.insert("bic_shift_is_half_k_ln2".into(), shift_err <= 1e-12);
    Ok(report)
}

/// Occam-factor approximation error of the evidence for the largest model.
pub fn occam_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    config.validate()?;
    let prior = config.prior()?;
    let menu = config.menu();
    let model = largest(&menu);
    let mut report = ExperimentReport::new(config);
    let mut means = Vec::new();
    for (ci, n) in config.sample_sizes()?.into_iter().enumerate() {
        let rows = run_indexed(workers, config.replicates, |rep| {
            let mut rng = rng_for(config, "occam", ci, rep);
            let s = Summary::new(sample_stats(&config.true_mean, config.sigma, n, &mut rng)?, config.sigma)?;
            let d = occam_decomposition(&s, model, &prior)?;
            Ok([d.discrepancy, d.discrepancy.abs()])
        })?;
        let mut cell = Cell::new(n);
        cell.free_dims = Some(model.free_dims());
        cell.put_values("discrepancy", &rows.iter().map(|r| r[0]).collect::<Vec<_>>());
        cell.put_values("abs_discrepancy", &rows.iter().map(|r| r[1]).collect::<Vec<_>>());
        means.push(cell.estimates["abs_discrepancy"].mean);
        report.cells.push(cell);
    }
    report
        .checks
        .insert("discrepancy_decreases".into(), means.windows(2).all(|w| w[1] < w[0]));
    Ok(report)
}

/// Expected information of one fresh observation under the model's
/// posterior predictive, averaged exactly over the true distribution.
pub fn expected_predictive_information(
    summary: &Summary,
    model: &GaussianModel,
    prior: &PriorSpec,
    true_mean: &[f64],
) -> Result<f64> {
    let post = posterior(summary, model, prior)?;
    let s2 = summary.sigma().powi(2);
    let v = s2 + post.sd * post.sd;
    let free: f64 = post
        .mean
        .iter()
        .zip(true_mean)
        .map(|(m, mu)| 0.5 * (2.0 * std::f64::consts::PI * v).ln() + (s2 + (mu - m).powi(2)) / (2.0 * v))
        .sum();
    let pinned: f64 = model
        .fixed_reference()
        .iter()
        .zip(&true_mean[model.free_dims()..])
        .map(|(c, mu)| 0.5 * ln_2pi_var(summary.sigma()) + (s2 + (mu - c).powi(2)) / (2.0 * s2))
        .sum();
    Ok(free + pinned)
}

/// Loss ratio of the models chosen by `IC^nu`, AIC and BIC relative to the
/// best model of the menu, and over-selection rates when the truth is in the
/// menu.
pub fn loss_ratio_experiment(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    config.validate()?;
    let prior = config.prior()?;
    let menu = config.menu();
    let true_k = menu
        .iter()
        .filter(|m| truth_in_model(&config.true_mean, m))
        .map(|m| m.free_dims())
        .min();
    let mut report = ExperimentReport::new(config);
    let mut cell_index = 0;
    for n in config.sample_sizes()? {
        for &nu in config.nu_grid.points() {
            cell_index += 1;
            let ci = cell_index;
            let rows = run_indexed(workers, config.replicates, |rep| {
                let mut rng = rng_for(config, "loss-ratio", ci, rep);
                let s = Summary::new(sample_stats(&config.true_mean, config.sigma, n, &mut rng)?, config.sigma)?;
                let loss: Vec<f64> = menu
                    .iter()
                    .map(|m| expected_predictive_information(&s, m, &prior, &config.true_mean))
                    .collect::<Result<_>>()?;
                let best = loss.iter().copied().fold(f64::INFINITY, f64::min);
                let index_of = |k: usize| menu.iter().position(|m| m.free_dims() == k).expect("selected from menu");
                let picks = [
                    decide(menu.iter().map(|m| generalized_ic(&s, m, "m", nu)).collect::<Result<_>>()?)?,
                    decide(menu.iter().map(|m| aic(&s, m, "m")).collect::<Result<_>>()?)?,
                    decide(menu.iter().map(|m| bic(&s, m, "m")).collect::<Result<_>>()?)?,
                ];
                let mut out = Vec::with_capacity(6);
                for &k in &picks {
                    out.push(loss[index_of(k)] / best);
                }
                for &k in &picks {
                    out.push(true_k.map_or(f64::NAN, |t| (k > t) as u8 as f64));
                }
                Ok(out)
            })?;
            let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
            let mut cell = Cell::new(n);
            cell.nu = Some(nu);
            for (j, name) in ["ic_nu", "aic", "bic"].iter().enumerate() {
                cell.put_values(&format!("epsilon_{name}"), &col(j));
                if true_k.is_some() {
                    cell.put_values(&format!("over_selection_{name}"), &col(3 + j));
                }
            }
            report.cells.push(cell);
        }
    }
    let min_eps = report
        .cells
        .iter()
        .flat_map(|c| c.estimates.iter())
        .filter(|(k, _)| k.starts_with("epsilon_"))
        .all(|(_, e)| e.mean >= 1.0 - 3.0 * e.se.max(0.0) - 1e-12);
    report.checks.insert("epsilon_at_least_one".into(), min_eps);
    Ok(report)
}

pub(crate) fn menu_extremes(config: &ExperimentConfig) -> (GaussianModel, GaussianModel) {
    let menu = config.menu();
    (smallest(&menu).clone(), largest(&menu).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn analytic_value_for_null_model() {
        let cfg = ExperimentConfig::default();
        let p = Partition::new(50, 50).unwrap();
        let a = analytic_cross_entropy(&cfg, &GaussianModel::null(1), p).unwrap();
        assert_relative_eq!(a, 50.0 * ((2.0 * std::f64::consts::PI).ln() + 1.0), epsilon = 1e-12);
    }

    #[test]
    fn analytic_complexity_term_at_nu_one() {
        let cfg = ExperimentConfig::default();
        let p = Partition::new(50, 50).unwrap();
        let a = analytic_cross_entropy(&cfg, &GaussianModel::nested(1, 1), p).unwrap();
        let base = expected_information_at_truth(100, 1, 1.0);
        // excess over the truth is K_nu minus the K/2 training-error term
        assert_relative_eq!(complexity_nu(1, 1.0).unwrap(), 0.5 * (1.0 + 2.0 * 2f64.ln()), epsilon = 1e-15);
        assert_relative_eq!(a - base, 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn expected_predictive_matches_direct_integral() {
        let s = Summary::new(crate::stats::SuffStats::from_parts(4, vec![0.3], vec![2.0]), 1.5).unwrap();
        let m = GaussianModel::nested(1, 1);
        let prior = PriorSpec::normal(2.0).unwrap();
        let mu = [0.7];
        let got = expected_predictive_information(&s, &m, &prior, &mu).unwrap();
        let post = posterior(&s, &m, &prior).unwrap();
        let v = 1.5f64.powi(2) + post.sd.powi(2);
        // crude Riemann sum of E[-ln N(y; m, v)] over y ~ N(mu, sigma^2)
        let (mut acc, h) = (0.0, 1e-3);
        let mut y = -15.0;
        while y < 15.0 {
            let p = (-(y - mu[0]).powi(2) / (2.0 * 2.25)).exp() / (2.0 * std::f64::consts::PI * 2.25).sqrt();
            let lq = -0.5 * (2.0 * std::f64::consts::PI * v).ln() - (y - post.mean[0]).powi(2) / (2.0 * v);
            acc -= p * lq * h;
            y += h;
        }
        assert_relative_eq!(got, acc, epsilon = 1e-6);
    }

    #[test]
    fn singleton_menu_has_unit_loss_ratio() {
        let cfg = ExperimentConfig {
            experiment: super::super::ExperimentKind::LossRatio,
            free_dims: vec![1],
            tau: Some(3.0),
            n_grid: "20".parse().unwrap(),
            nu_grid: "1".parse().unwrap(),
            replicates: 50,
            ..Default::default()
        };
        let r = loss_ratio_experiment(&cfg, Some(1)).unwrap();
        for key in ["epsilon_ic_nu", "epsilon_aic", "epsilon_bic"] {
            let e = r.cells[0].estimates[key];
            assert_eq!(e.mean, 1.0);
            assert_eq!(e.se, 0.0);
        }
    }
}
