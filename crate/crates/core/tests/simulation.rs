use lindley::rng::{stream, tag};
use lindley::simulation::{
    generate_dataset, run_experiment, run_indexed, sample_stats, Estimate, ExperimentConfig, ExperimentKind,
};
use rand::Rng;

fn occam(replicates: usize) -> ExperimentConfig {
    ExperimentConfig {
        experiment: ExperimentKind::Occam,
        tau: Some(5.0),
        true_mean: vec![0.3],
        n_grid: "20".parse().unwrap(),
        replicates,
        ..Default::default()
    }
}

#[test]
fn standard_error_shrinks_like_root_replicates() {
    let se = |reps| {
        let r = run_experiment(&occam(reps), Some(2)).unwrap();
        r.cells[0].estimate("discrepancy").unwrap().se
    };
    let ratio = se(8000) / se(4000);
    assert!((ratio - 0.5f64.sqrt()).abs() < 0.05, "{ratio}");
}

#[test]
fn sufficient_statistics_have_the_right_law() {
    // mean ~ N(mu, sigma^2 / n), sse / sigma^2 ~ chi2(n - 1)
    let (mu, sigma, n, reps) = (1.5, 2.0, 10, 20_000);
    let draws = run_indexed(None, reps, |i| sample_stats(&[mu], sigma, n, &mut stream(9, &[i as u64]))).unwrap();
    let means = Estimate::from_values(&draws.iter().map(|s| s.mean()[0]).collect::<Vec<_>>());
    let sses = Estimate::from_values(&draws.iter().map(|s| s.sse()[0] / (sigma * sigma)).collect::<Vec<_>>());
    assert!(means.z(mu).abs() < 4.0);
    assert!(sses.z((n - 1) as f64).abs() < 4.0);
    let sd = means.se * (reps as f64).sqrt();
    assert!((sd - sigma / (n as f64).sqrt()).abs() < 0.02);
}

#[test]
fn raw_datasets_agree_with_the_statistics_sampler() {
    let (mu, sigma, n, reps) = (-0.7, 1.0, 25, 10_000);
    let raw = run_indexed(None, reps, |i| {
        generate_dataset(&[mu], sigma, n, &mut stream(10, &[i as u64])).map(|s| s.stats().sse()[0])
    })
    .unwrap();
    assert!(Estimate::from_values(&raw).z((n - 1) as f64).abs() < 4.0);
}

#[test]
fn streams_are_keyed_not_sequential() {
    let a: Vec<u64> = (0..4).map(|_| 0).scan(stream(1, &[tag("a"), 3, 7]), |r, _| Some(r.random())).collect();
    let b: Vec<u64> = (0..4).map(|_| 0).scan(stream(1, &[tag("a"), 3, 7]), |r, _| Some(r.random())).collect();
    assert_eq!(a, b);
    // neighbouring keys give unrelated uniforms
    let n = 20_000;
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x: f64 = stream(1, &[i]).random();
            let y: f64 = stream(1, &[i + 1]).random();
            (x - 0.5, y - 0.5)
        })
        .collect();
    let cov = pairs.iter().map(|(x, y)| x * y).sum::<f64>() / n as f64;
    assert!((cov / (1.0 / 12.0)).abs() < 4.0 / (n as f64).sqrt());
    assert_ne!(stream(1, &[1, 2]).random::<u64>(), stream(1, &[2, 1]).random::<u64>());
}

#[test]
fn indexed_runs_keep_order() {
    let v = run_indexed(Some(4), 1000, |i| Ok(i * i)).unwrap();
    assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
    assert!(run_indexed(Some(3), 10, |i| if i == 7 { Err(lindley::Error::EmptyGeneralizationSet) } else { Ok(i) }).is_err());
}

#[test]
fn configs_round_trip_through_toml() {
    let c = occam(123);
    let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
    assert_eq!(back, c);
    assert!(ExperimentConfig::from_toml("experiment = \"occam\"\nunknown = 1").is_err());
}

#[test]
fn improper_prior_is_rejected_where_evidence_is_needed() {
    let mut c = occam(10);
    c.tau = None;
    assert!(run_experiment(&c, Some(1)).is_err());
}
