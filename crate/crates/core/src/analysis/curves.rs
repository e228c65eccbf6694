//! Tabulated curves and the grids they are evaluated on.

use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::criteria::complexity_nu;
use crate::error::{Error, Result};
use crate::io::{format_f64, write_echo};

use super::resolution::{bayes_resolution, bayes_resolution_exact, frequentist_resolution};
use super::significance::significance_level;

/// Grid syntax: `log:a:b:n`, `lin:a:b:n`, `pow2:lo:hi`, or a comma list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    spec: String,
    points: Vec<f64>,
}

impl Grid {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("grid", "must be nonempty"));
        }
        let spec = points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        Ok(Self { spec, points })
    }
}

fn ranged(kind: &str, a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("grid", "point count must be >= 1"));
    }
    let step = |i: usize| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
    match kind {
        "lin" => Ok((0..n).map(|i| a + (b - a) * step(i)).collect()),
        "log" => {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::invalid("grid", "log grid endpoints must be > 0"));
            }
            let (la, lb) = (a.ln(), b.ln());
            Ok((0..n)
                .map(|i| match i {
                    0 => a,
                    i if i == n - 1 => b,
                    _ => (la + (lb - la) * step(i)).exp(),
                })
                .collect())
        }
        _ => unreachable!(),
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad grid `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let points = match parts.as_slice() {
            [kind @ ("log" | "lin"), a, b, n] => ranged(
                kind,
                crate::io::parse_f64(a)?,
                crate::io::parse_f64(b)?,
                n.trim().parse().map_err(|_| bad())?,
            )?,
            ["pow2", lo, hi] => {
                let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
                let hi: i32 = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                (lo..=hi).map(|e| 2f64.powi(e)).collect()
            }
            [list] => list
                .split(',')
                .map(crate::io::parse_f64)
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(bad()),
        };
        if points.is_empty() || points.iter().any(|p| p.is_nan()) {
            return Err(bad());
        }
        Ok(Self {
            spec: s.trim().to_string(),
            points,
        })
    }
}

impl TryFrom<String> for Grid {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        g.spec
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.spec)
    }
}

/// A table of doubles with named columns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Curve {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write_csv<W: Write>(&self, w: &mut W, echo: &[(String, String)]) -> Result<()> {
        write_echo(w, echo)?;
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_f64(x)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// `nu, complexity` for `K_nu` of a `k`-parameter model.
pub fn complexity_curve(k: usize, nu: &Grid) -> Result<Curve> {
    let mut c = Curve::new(&["nu", "complexity"]);
    for &v in nu.points() {
        c.push(vec![v, complexity_nu(k, v)?]);
    }
    Ok(c)
}

/// `nu, alpha` for the significance level at dimension difference `delta_k`.
pub fn significance_curve(delta_k: usize, nu: &Grid) -> Result<Curve> {
    let mut c = Curve::new(&["nu", "alpha"]);
    for &v in nu.points() {
        c.push(vec![v, significance_level(delta_k, v)?]);
    }
    Ok(c)
}

/// Resolution thresholds for every `(N, tau)` pair. `threshold_bayes` is the
/// leading-order rule and is `nan` where it is undefined (`tau <= sigma_mu`).
pub fn resolution_curve(sigma: f64, n: &Grid, tau: &Grid, z: f64) -> Result<Curve> {
    let mut c = Curve::new(&[
        "n",
        "tau",
        "threshold_bayes",
        "threshold_freq",
        "ratio_to_freq",
        "threshold_bayes_exact",
    ]);
    for &nn in n.points() {
        if !(nn >= 1.0) {
            return Err(Error::invalid("n", format!("sample sizes must be >= 1, got {nn}")));
        }
        let sigma_mu = sigma / nn.sqrt();
        let freq = frequentist_resolution(sigma_mu, z)?;
        for &t in tau.points() {
            let bayes = bayes_resolution(sigma_mu, t).unwrap_or(f64::NAN);
            let exact = bayes_resolution_exact(sigma_mu, t)?;
            c.push(vec![nn, t, bayes, freq, bayes / freq, exact]);
        }
    }
    Ok(c)
}
