use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Training / generalization split of `N = n_train + n_gen` observations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    n_train: usize,
    n_gen: usize,
}

impl Partition {
    pub fn new(n_train: usize, n_gen: usize) -> Result<Self> {
        if n_gen == 0 {
            return Err(Error::EmptyGeneralizationSet);
        }
        Ok(Self { n_train, n_gen })
    }

    /// Leave-one-out: `N_T = N - 1`, `N_G = 1`.
    pub fn leave_one_out(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "leave-one-out needs N >= 1"));
        }
        Self::new(n - 1, 1)
    }

    /// Whole sample in the generalization set (`nu = inf`).
    pub fn postdictive(n: usize) -> Result<Self> {
        Self::new(0, n)
    }

    /// Minimal training set `N_T = 1`.
    pub fn minimal_training(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", "minimal training set needs N >= 2"));
        }
        Self::new(1, n - 1)
    }

    /// Nearest integral split for a target ratio: `N_G = round(nu N / (1 + nu))`
    /// clamped to `[1, N - 1]`, or `N_G = N` when `nu` is infinite. `nu = 0`
    /// maps to leave-one-out.
    pub fn from_nu(nu: f64, n: usize) -> Result<Self> {
        if nu.is_nan() || nu < 0.0 {
            return Err(Error::invalid("nu", format!("must be >= 0, got {nu}")));
        }
        if nu.is_infinite() {
            return Self::postdictive(n);
        }
        if n < 2 {
            return Err(Error::invalid("n", "a finite partition needs N >= 2"));
        }
        let target = (nu * n as f64 / (1.0 + nu)).round();
        let n_gen = (target as usize).clamp(1, n - 1);
        Self::new(n - n_gen, n_gen)
    }

    pub fn n_train(&self) -> usize {
        self.n_train
    }

    pub fn n_gen(&self) -> usize {
        self.n_gen
    }

    pub fn n(&self) -> usize {
        self.n_train + self.n_gen
    }

    /// Realized `nu = N_G / N_T`, infinite when `N_T = 0`.
    pub fn nu(&self) -> f64 {
        if self.n_train == 0 {
            f64::INFINITY
        } else {
            self.n_gen as f64 / self.n_train as f64
        }
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::PartitionMismatch {
                n_train: self.n_train,
                n_gen: self.n_gen,
                n,
            });
        }
        Ok(())
    }
}
