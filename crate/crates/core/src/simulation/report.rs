use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::Curve;
use crate::criteria::Partition;
use crate::stats::CompensatedSum;

use super::config::ExperimentConfig;
use super::lindley::LindleyWitness;

/// A Monte Carlo mean with its standard error `sd / sqrt(replicates)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    pub replicates: usize,
}

impl Estimate {
    /// Moments of `values`, summed in slice order.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                se: f64::NAN,
                replicates: 0,
            };
        }
        let mean = values.iter().copied().collect::<CompensatedSum>().value() / n as f64;
        let se = if n < 2 {
            f64::NAN
        } else {
            let ss = values.iter().map(|v| (v - mean).powi(2)).collect::<CompensatedSum>().value();
            (ss / (n - 1) as f64 / n as f64).sqrt()
        };
        Self {
            mean,
            se,
            replicates: n,
        }
    }

    pub fn exact(value: f64) -> Self {
        Self {
            mean: value,
            se: 0.0,
            replicates: 1,
        }
    }

    /// `(self - other) / sqrt(se^2 + other.se^2)` for independent estimates.
    pub fn z_against(&self, other: &Estimate) -> f64 {
        (self.mean - other.mean) / self.se.hypot(other.se)
    }

    /// `(self - target) / se`.
    pub fn z(&self, target: f64) -> f64 {
        (self.mean - target) / self.se
    }
}

/// Results for one grid cell.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_dims: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    pub estimates: BTreeMap<String, Estimate>,
    pub tallies: BTreeMap<String, u64>,
    pub values: BTreeMap<String, f64>,
}

impl Cell {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Default::default()
        }
    }

    pub fn estimate(&self, key: &str) -> Option<&Estimate> {
        self.estimates.get(key)
    }

    pub(crate) fn put(&mut self, key: &str, e: Estimate) {
        self.estimates.insert(key.to_string(), e);
    }

    pub(crate) fn put_values(&mut self, key: &str, values: &[f64]) {
        self.put(key, Estimate::from_values(values));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub cells: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<Curve>,
    /// Named pass/fail checks evaluated on the results.
    pub checks: BTreeMap<String, bool>,
    /// Named scalar results such as crossing points.
    pub markers: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LindleyWitness>,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            config: config.clone(),
            seed: config.seed,
            cells: Vec::new(),
            curve: None,
            checks: BTreeMap::new(),
            markers: BTreeMap::new(),
            witness: None,
        }
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let r = if pretty {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string(self)
        };
        r.expect("report serializes")
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}
