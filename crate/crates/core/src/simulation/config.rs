use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::Grid;
use crate::criteria::DEFAULT_BUDGET;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianModel, PriorSpec};
use crate::rng::DEFAULT_SEED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Mean `IC^nu` against the true cross entropy.
    Unbiasedness,
    /// Monte Carlo true cross entropy with its analytic value.
    CrossEntropy,
    /// Resolution thresholds against sample size.
    Resolution,
    /// Expected predictive and postdictive log-ratios against sample size.
    Prepost,
    /// Leave-one-out against the per-point derivative of the evidence, and
    /// missing against parameter information.
    Derivative,
    /// AIC and BIC decisions before and after pairing observations.
    Binning,
    /// Occam-factor approximation of the evidence.
    Occam,
    /// Selected against best-available predictive performance.
    LossRatio,
    /// Smallest prior scale giving the Lindley configuration.
    Lindley,
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).map_err(|_| std::fmt::Error)?;
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Parse(format!("unknown experiment `{s}`")))
    }
}

/// Declarative description of one Monte Carlo experiment. Every field has a
/// default so a config file only lists what it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// True mean; its length is the data dimension `D`.
    pub true_mean: Vec<f64>,
    pub sigma: f64,
    /// Prior scale for the free coordinates; absent means the flat prior.
    pub tau: Option<f64>,
    pub n_grid: Grid,
    pub nu_grid: Grid,
    /// Prior scales for the resolution curve.
    pub tau_grid: Grid,
    /// Free-dimension counts of the nested model menu.
    pub free_dims: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub budget: usize,
    /// Datasets per cell on which the subset-enumeration estimator is also run.
    pub lko_replicates: usize,
    /// Frequentist threshold multiplier.
    pub z: f64,
    pub confidence: f64,
    pub posterior_target: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::Unbiasedness,
            true_mean: vec![0.0],
            sigma: 1.0,
            tau: None,
            n_grid: "100".parse().expect("static grid"),
            nu_grid: "0.000001,0.1,1,10".parse().expect("static grid"),
            tau_grid: "10,100,1000,10000".parse().expect("static grid"),
            free_dims: vec![0, 1],
            replicates: 1000,
            seed: DEFAULT_SEED,
            budget: DEFAULT_BUDGET,
            lko_replicates: 0,
            z: 2.0,
            confidence: 0.95,
            posterior_target: 0.95,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn dim(&self) -> usize {
        self.true_mean.len()
    }

    pub fn prior(&self) -> Result<PriorSpec> {
        match self.tau {
            Some(t) => PriorSpec::normal(t),
            None => Ok(PriorSpec::ImproperFlat),
        }
    }

    /// Nested models freeing the first `k` coordinates, one per `free_dims` entry.
    pub fn menu(&self) -> Vec<GaussianModel> {
        self.free_dims.iter().map(|&k| GaussianModel::nested(k, self.dim())).collect()
    }

    /// Sample sizes from `n_grid`, which must be positive integers.
    pub fn sample_sizes(&self) -> Result<Vec<usize>> {
        self.n_grid
            .points()
            .iter()
            .map(|&n| {
                if n >= 1.0 && n.fract() == 0.0 && n < 1e15 {
                    Ok(n as usize)
                } else {
                    Err(Error::invalid("n_grid", format!("sample sizes must be positive integers, got {n}")))
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::invalid("replicates", "must be >= 1"));
        }
        if self.true_mean.is_empty() || self.true_mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::invalid("true_mean", "must be a nonempty vector of finite values"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid("sigma", format!("must be finite and > 0, got {}", self.sigma)));
        }
        self.prior()?;
        self.sample_sizes()?;
        if self.nu_grid.points().iter().any(|&v| v.is_nan() || v < 0.0) {
            return Err(Error::invalid("nu_grid", "partition ratios must be >= 0"));
        }
        if self.free_dims.is_empty() {
            return Err(Error::invalid("free_dims", "model menu must be nonempty"));
        }
        if let Some(&k) = self.free_dims.iter().find(|&&k| k > self.dim()) {
            return Err(Error::invalid("free_dims", format!("{k} exceeds the data dimension {}", self.dim())));
        }
        if self.budget == 0 {
            return Err(Error::invalid("budget", "must be >= 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig {
            experiment: ExperimentKind::Binning,
            tau: Some(10.0),
            n_grid: "pow2:0:4".parse().unwrap(),
            ..Default::default()
        };
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let cfg = ExperimentConfig::from_toml("experiment = \"loss-ratio\"\nreplicates = 7\n").unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::LossRatio);
        assert_eq!(cfg.replicates, 7);
        assert_eq!(cfg.sigma, 1.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_toml("replicates = 0").is_err());
        assert!(ExperimentConfig::from_toml("n_grid = \"1.5\"").is_err());
        assert!(ExperimentConfig::from_toml("free_dims = [2]").is_err());
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn kind_names() {
        assert_eq!(ExperimentKind::LossRatio.to_string(), "loss-ratio");
        assert_eq!("prepost".parse::<ExperimentKind>().unwrap(), ExperimentKind::Prepost);
    }
}
