//! Closed forms against quadrature, brute-force sums and statrs.

mod common;

use approx::assert_relative_eq;
use lindley::analysis::parameter_information;
use lindley::criteria::{leave_k_out_cross_entropy, loo_cross_entropy, Partition};
use lindley::gaussian::{
    log_evidence, mle_information, posterior, predictive_information, GaussianModel, PriorSpec, SampleSet,
};
use lindley::rng::stream;
use lindley::special;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use common::*;

#[test]
fn evidence_matches_quadrature() {
    let mut rng = stream(101, &[]);
    for _ in 0..200 {
        let n = rng.random_range(1..=100);
        let tau = 10f64.powf(rng.random_range(-1.0..2.0));
        let sigma = rng.random_range(0.3..3.0);
        let mu = rng.random_range(-2.0..2.0) * tau.min(3.0);
        let x = normal_draws(&mut rng, n, mu, sigma);
        let s = SampleSet::scalar(&x, sigma).unwrap();
        let closed = log_evidence(s.summary(), &GaussianModel::nested(1, 1), &PriorSpec::normal(tau).unwrap()).unwrap();
        let oracle = log_evidence_quadrature(&x, sigma, tau);
        assert!((closed - oracle).abs() <= 1e-8, "n={n} tau={tau}: {closed} vs {oracle}");
    }
}

#[test]
fn null_evidence_is_the_likelihood() {
    let mut rng = stream(102, &[]);
    let x = normal_draws(&mut rng, 17, 0.3, 1.5);
    let s = SampleSet::scalar(&x, 1.5).unwrap();
    let h = -log_evidence(s.summary(), &GaussianModel::null(1), &PriorSpec::ImproperFlat).unwrap();
    assert_relative_eq!(h, raw_information(&x, 0.0, 1.5), max_relative = 1e-13);
    let hmax = mle_information(s.summary(), &GaussianModel::nested(1, 1)).unwrap();
    assert_relative_eq!(hmax, raw_information(&x, mean(&x), 1.5), max_relative = 1e-13);
}

#[test]
fn predictive_information_is_an_evidence_ratio() {
    let mut rng = stream(103, &[]);
    let x = normal_draws(&mut rng, 12, -0.4, 0.8);
    let s = SampleSet::scalar(&x, 0.8).unwrap();
    let training = [0, 3, 4, 9];
    let h = predictive_information(&s, &training, &GaussianModel::nested(1, 1), &PriorSpec::normal(2.0).unwrap()).unwrap();
    let xt: Vec<f64> = training.iter().map(|&i| x[i]).collect();
    let oracle = log_evidence_quadrature(&xt, 0.8, 2.0) - log_evidence_quadrature(&x, 0.8, 2.0);
    assert!((h - oracle).abs() < 1e-9, "{h} vs {oracle}");
}

#[test]
fn parameter_information_matches_kl_quadrature() {
    let mut rng = stream(104, &[]);
    for _ in 0..50 {
        let n = rng.random_range(1..=200);
        let tau = 10f64.powf(rng.random_range(-1.0..2.0));
        let x = normal_draws(&mut rng, n, 0.5, 1.0);
        let s = SampleSet::scalar(&x, 1.0).unwrap();
        let (model, prior) = (GaussianModel::nested(1, 1), PriorSpec::normal(tau).unwrap());
        let post = posterior(s.summary(), &model, &prior).unwrap();
        let oracle = kl_quadrature(post.mean[0], post.sd, 0.0, tau);
        let closed = parameter_information(s.summary(), &model, &prior).unwrap();
        assert!((closed - oracle).abs() < 1e-8 * oracle.max(1.0), "{closed} vs {oracle}");
    }
}

#[test]
fn loo_closed_form_matches_row_by_row_sum() {
    let mut rng = stream(105, &[]);
    let x = normal_draws(&mut rng, 25, 1.0, 2.0);
    let s = SampleSet::scalar(&x, 2.0).unwrap();
    let model = GaussianModel::nested(1, 1);

    // flat prior: each held-out point is predicted by N(mean_rest, sigma^2 (1 + 1/(N-1)))
    let n = x.len();
    let flat: f64 = (0..n)
        .map(|i| {
            let rest: Vec<f64> = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            let sd = 2.0 * (1.0 + 1.0 / (n - 1) as f64).sqrt();
            -normal_pdf(x[i], mean(&rest), sd).ln()
        })
        .sum();
    assert_relative_eq!(loo_cross_entropy(s.summary(), &model, &PriorSpec::ImproperFlat).unwrap(), flat, max_relative = 1e-12);

    // proper prior: evidence ratios by quadrature
    let tau = 3.0;
    let full = log_evidence_quadrature(&x, 2.0, tau);
    let proper: f64 = (0..n)
        .map(|i| {
            let rest: Vec<f64> = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            log_evidence_quadrature(&rest, 2.0, tau) - full
        })
        .sum();
    let closed = loo_cross_entropy(s.summary(), &model, &PriorSpec::normal(tau).unwrap()).unwrap();
    assert!((closed - proper).abs() < 1e-7, "{closed} vs {proper}");
}

#[test]
fn exhaustive_leave_k_out_matches_enumeration() {
    let mut rng = stream(106, &[]);
    let x = normal_draws(&mut rng, 9, 0.2, 1.0);
    let s = SampleSet::scalar(&x, 1.0).unwrap();
    let (model, prior) = (GaussianModel::nested(1, 1), PriorSpec::normal(1.5).unwrap());
    let k = 3;
    let full = log_evidence_quadrature(&x, 1.0, 1.5);
    let subsets = all_subsets(x.len(), k);
    let avg = subsets
        .iter()
        .map(|g| {
            let train: Vec<f64> = (0..x.len()).filter(|i| !g.contains(i)).map(|i| x[i]).collect();
            log_evidence_quadrature(&train, 1.0, 1.5) - full
        })
        .sum::<f64>()
        / subsets.len() as f64;
    let oracle = x.len() as f64 / k as f64 * avg;
    let est = leave_k_out_cross_entropy(&s, &model, &prior, Partition::new(x.len() - k, k).unwrap(), 1000, 0).unwrap();
    assert!(est.exhaustive);
    assert_eq!(est.subsets, subsets.len());
    assert!((est.value - oracle).abs() < 1e-8, "{} vs {oracle}", est.value);
}

#[test]
fn special_functions_match_statrs() {
    use statrs::function::{erf, gamma};
    for &x in &[0.01, 0.5, 1.0, 2.5, 7.3, 30.0, 171.5] {
        assert_relative_eq!(special::ln_gamma(x), gamma::ln_gamma(x), max_relative = 1e-12, epsilon = 1e-14);
    }
    for &a in &[0.5, 1.0, 3.0, 12.5, 60.0] {
        for &x in &[0.01, 0.7, 3.0, 11.0, 40.0, 90.0] {
            assert_relative_eq!(special::gamma_p(a, x).unwrap(), gamma::gamma_lr(a, x), epsilon = 1e-13);
            let (q, oq) = (special::gamma_q(a, x).unwrap(), gamma::gamma_ur(a, x));
            assert!((q - oq).abs() <= 1e-12 * oq.max(1e-300) || (q - oq).abs() < 1e-15, "Q({a},{x})");
        }
    }
    for &dof in &[1.0, 2.0, 5.0, 20.0] {
        let chi = ChiSquared::new(dof).unwrap();
        for &x in &[0.1, 1.0, 4.0, 15.0] {
            assert_relative_eq!(special::chi2_cdf(x, dof).unwrap(), chi.cdf(x), epsilon = 1e-13);
            assert_relative_eq!(special::chi2_sf(x, dof).unwrap(), chi.sf(x), max_relative = 1e-11);
        }
    }
    let std = Normal::standard();
    for &z in &[-8.0, -3.0, -0.5, 0.0, 1.3, 6.0] {
        // statrs' erfc is only good to ~1e-10
        assert_relative_eq!(special::erfc(z), erf::erfc(z), max_relative = 1e-9);
        assert_relative_eq!(special::normal_cdf(z), std.cdf(z), max_relative = 1e-9);
    }
    // high-precision references
    for (z, v) in [(-0.5, 1.520_499_877_813_046_5), (1.3, 6.599_205_505_934_755e-2), (6.0, 2.151_973_671_249_891_3e-17)] {
        assert_relative_eq!(special::erfc(z), v, max_relative = 1e-13);
    }
    for (z, phi) in [(-3.0, 1.349_898_031_630_094_5e-3), (-8.0, 6.220_960_574_271_784e-16), (1.3, 0.903_199_515_414_389_7)] {
        assert_relative_eq!(special::normal_cdf(z), phi, max_relative = 1e-13);
    }
    for &p in &[1e-10, 0.001, 0.025, 0.5, 0.8, 0.975, 0.999999] {
        assert_relative_eq!(special::normal_quantile(p).unwrap(), std.inverse_cdf(p), max_relative = 1e-9);
    }
}
