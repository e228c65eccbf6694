//! Independent oracles for the integration tests: adaptive Gauss-Kronrod
//! quadrature and brute-force sums over raw data. Nothing here calls the
//! closed forms under test.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point
/// Gauss rule.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to relative
/// tolerance `rel`. The interval is first cut into 64 panels so a narrow peak
/// cannot slip between the nodes of a single rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    fn go(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: (f64, f64), depth: u32) -> f64 {
        let (v, err) = whole;
        if err <= tol || err <= 50.0 * f64::EPSILON * v.abs() || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        let l = gk15(f, a, m);
        let r = gk15(f, m, b);
        go(f, a, m, 0.5 * tol, l, depth - 1) + go(f, m, b, 0.5 * tol, r, depth - 1)
    }
    const PANELS: usize = 64;
    let h = (b - a) / PANELS as f64;
    let panels: Vec<(f64, f64, (f64, f64))> = (0..PANELS)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            (lo, hi, gk15(&f, lo, hi))
        })
        .collect();
    let total: f64 = panels.iter().map(|p| p.2 .0).sum();
    let tol = rel * total.abs() / PANELS as f64;
    panels.into_iter().map(|(lo, hi, w)| go(&f, lo, hi, tol, w, 30)).sum()
}

pub fn normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
}

/// `-ln` likelihood of scalar data at location `mu`, summed row by row.
pub fn raw_information(x: &[f64], mu: f64, sigma: f64) -> f64 {
    x.iter()
        .map(|&v| 0.5 * (2.0 * PI * sigma * sigma).ln() + (v - mu).powi(2) / (2.0 * sigma * sigma))
        .sum()
}

/// `ln q(x)` for scalar data under `mu ~ N(0, tau^2)`, by quadrature of
/// likelihood times prior. The likelihood is rescaled by its maximum so the
/// integrand stays O(1).
pub fn log_evidence_quadrature(x: &[f64], sigma: f64, tau: f64) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let h_min = raw_information(x, mean, sigma);
    // the mass sits between 0 and the sample mean, within a few of the
    // narrower of the likelihood and prior widths
    let w = (sigma / n.sqrt()).min(tau);
    let (lo, hi) = (mean.min(0.0) - 40.0 * w, mean.max(0.0) + 40.0 * w);
    let integrand = |mu: f64| (h_min - raw_information(x, mu, sigma)).exp() * normal_pdf(mu, 0.0, tau);
    let z = integrate(integrand, lo, hi, 1e-13);
    z.ln() - h_min
}

/// Kullback-Leibler divergence of `N(m1, s1^2)` from `N(m0, s0^2)` by quadrature.
pub fn kl_quadrature(m1: f64, s1: f64, m0: f64, s0: f64) -> f64 {
    let f = |x: f64| {
        let p = normal_pdf(x, m1, s1);
        if p == 0.0 {
            0.0
        } else {
            p * (p.ln() - normal_pdf(x, m0, s0).ln())
        }
    };
    integrate(f, m1 - 40.0 * s1, m1 + 40.0 * s1, 1e-12)
}

/// Sum of squared deviations about the mean, two-pass.
pub fn sse(x: &[f64]) -> f64 {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - m).powi(2)).sum()
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn normal_draws(rng: &mut impl Rng, n: usize, mu: f64, sigma: f64) -> Vec<f64> {
    let d = Normal::new(mu, sigma).unwrap();
    (0..n).map(|_| d.sample(rng)).collect()
}

/// Every `k`-subset of `0..n`, in lexicographic order.
pub fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
