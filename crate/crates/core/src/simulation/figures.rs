use std::f64::consts::E;

use crate::analysis::{bayes_resolution, resolution_curve, Curve};
use crate::criteria::loo_cross_entropy;
use crate::error::{Error, Result};
use crate::gaussian::{evidence_information, Summary};
use crate::rng::{stream, tag};

use super::config::ExperimentConfig;
use super::experiments::menu_extremes;
use super::report::{Cell, Estimate, ExperimentReport};
use super::sampling::{run_indexed, sample_stats};

/// Frequentist detection sample size `(z sigma / mu)^2` for a displacement `mu`.
pub fn frequentist_detection_n(sigma: f64, z: f64, mu: f64) -> f64 {
    (z * sigma / mu).powi(2)
}

/// Continuous sample size at which the leading-order Bayes threshold falls
/// to `|mu|`, for prior scale `tau`.
pub fn bayes_detection_n(sigma: f64, tau: f64, mu: f64) -> Result<f64> {
    let mu = mu.abs();
    if !(mu > 0.0) {
        return Err(Error::invalid("mu", "detection needs a nonzero displacement"));
    }
    let excess = |n: f64| bayes_resolution(sigma / n.sqrt(), tau).map(|t| t - mu);
    // the threshold rises from 0 at sigma_mu = tau to a peak at sigma_mu = tau / sqrt(e),
    // then falls; detection is the root on the falling branch
    let mut lo = E * (sigma / tau).powi(2);
    if excess(lo)? <= 0.0 {
        return Ok(lo);
    }
    let mut hi = lo.max(1.0);
    while excess(hi)? > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::domain("Bayes detection", "threshold never reaches the displacement"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Resolution thresholds across `n_grid` and `tau_grid`, with checks that
/// every threshold shrinks with `N` and that the Bayes threshold exceeds the
/// frequentist one wherever `tau / sigma_mu > e^2`.
pub fn figure_resolution(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let curve = resolution_curve(config.sigma, &config.n_grid, &config.tau_grid, config.z)?;
    let mut report = ExperimentReport::new(config);

    let col = |name: &str| curve.column(name).expect("declared column");
    let (ns, taus, bayes, freq) = (col("n"), col("tau"), col("threshold_bayes"), col("threshold_freq"));
    let mut exceeds = true;
    for i in 0..ns.len() {
        let sigma_mu = config.sigma / ns[i].sqrt();
        if taus[i] / sigma_mu > E * E && !(bayes[i] > freq[i]) {
            exceeds = false;
        }
    }
    // the Bayes threshold falls with N only past its peak at tau / sigma_mu = sqrt(e)
    let past_peak = |i: usize| taus[i] * ns[i].sqrt() / config.sigma > E.sqrt();
    let mut decreasing = true;
    for &t in config.tau_grid.points() {
        let mut prev: Option<usize> = None;
        for i in (0..ns.len()).filter(|&i| taus[i] == t) {
            if let Some(j) = prev {
                if !(freq[i] < freq[j]) || (past_peak(j) && !(bayes[i] < bayes[j])) {
                    decreasing = false;
                }
            }
            prev = Some(i);
        }
    }
    report.checks.insert("bayes_exceeds_frequentist".into(), exceeds);
    report.checks.insert("thresholds_decrease_in_n".into(), decreasing);

    let mu = config.true_mean[0];
    if mu != 0.0 {
        let nf = frequentist_detection_n(config.sigma, config.z, mu);
        report.markers.insert("frequentist_detection_n".into(), nf);
        let mut later = true;
        for &t in config.tau_grid.points() {
            let nb = bayes_detection_n(config.sigma, t, mu)?;
            report.markers.insert(format!("bayes_detection_n_tau={t}"), nb);
            if t * nf.sqrt() / config.sigma > E * E && !(nb > nf) {
                later = false;
            }
        }
        report.checks.insert("bayes_detects_later".into(), later);
    }
    report.curve = Some(curve);
    Ok(report)
}

/// Index just after the last non-positive value, if the series ends positive.
fn final_crossing(values: &[f64]) -> Option<usize> {
    if values.last().is_none_or(|&v| v <= 0.0) {
        return None;
    }
    Some(values.iter().rposition(|&v| v <= 0.0).map_or(0, |i| i + 1))
}

/// Expected predictive (`1|N-1`) and postdictive (`N|0`) log-ratios
/// `H_small - H_large` between the smallest and largest models of the menu,
/// on every `N` of the grid. Positive values favor the larger model.
pub fn figure_prepost(config: &ExperimentConfig, workers: Option<usize>) -> Result<ExperimentReport> {
    config.validate()?;
    let prior = config.prior()?;
    if !prior.is_proper() {
        return Err(Error::ImproperPrior {
            quantity: "postdictive curve",
        });
    }
    let (small, large) = menu_extremes(config);
    let ns = config.sample_sizes()?;
    let mut report = ExperimentReport::new(config);
    let mut curve = Curve::new(&["n", "predictive", "predictive_se", "postdictive", "postdictive_se"]);
    let (mut pred, mut post) = (Vec::new(), Vec::new());
    for (ci, &n) in ns.iter().enumerate() {
        let rows = run_indexed(workers, config.replicates, |rep| {
            let mut rng = stream(config.seed, &[tag("prepost"), ci as u64, rep as u64]);
            let s = Summary::new(sample_stats(&config.true_mean, config.sigma, n, &mut rng)?, config.sigma)?;
            let p = loo_cross_entropy(&s, &small, &prior)? - loo_cross_entropy(&s, &large, &prior)?;
            let q = evidence_information(&s, &small, &prior)? - evidence_information(&s, &large, &prior)?;
            Ok([p, q])
        })?;
        let ep = Estimate::from_values(&rows.iter().map(|r| r[0]).collect::<Vec<_>>());
        let eq = Estimate::from_values(&rows.iter().map(|r| r[1]).collect::<Vec<_>>());
        curve.push(vec![n as f64, ep.mean, ep.se, eq.mean, eq.se]);
        pred.push(ep.mean);
        post.push(eq.mean);
        let mut cell = Cell::new(n);
        cell.put("predictive", ep);
        cell.put("postdictive", eq);
        report.cells.push(cell);
    }

    let argmin = post
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    report.markers.insert("postdictive_min_n".into(), ns[argmin] as f64);
    let pc = final_crossing(&pred);
    let qc = final_crossing(&post);
    if let Some(i) = pc {
        report.markers.insert("predictive_crossing_n".into(), ns[i] as f64);
    }
    if let Some(i) = qc {
        report.markers.insert("postdictive_crossing_n".into(), ns[i] as f64);
    }
    report.checks.insert(
        "predictive_crosses_first".into(),
        matches!((pc, qc), (Some(a), Some(b)) if a < b),
    );
    report.checks.insert(
        "predictive_crossing_at_postdictive_min".into(),
        pc.is_some_and(|i| i.abs_diff(argmin) <= 1),
    );
    report.curve = Some(curve);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_index() {
        assert_eq!(final_crossing(&[-1.0, -0.5, 0.2, -0.1, 0.3, 1.0]), Some(4));
        assert_eq!(final_crossing(&[0.5, 1.0]), Some(0));
        assert_eq!(final_crossing(&[0.5, -1.0]), None);
    }

    #[test]
    fn detection_sizes() {
        assert!((frequentist_detection_n(1.0, 2.0, 0.1) - 400.0).abs() < 1e-9);
        let nb = bayes_detection_n(1.0, 100.0, 0.1).unwrap();
        assert!(nb > 400.0);
        let t = bayes_resolution(1.0 / nb.sqrt(), 100.0).unwrap();
        assert!((t - 0.1).abs() < 1e-9);
    }
}
