//! Per-coordinate sufficient statistics for isotropic Gaussian data.
//!
//! Everything downstream (informations, evidence, posteriors) is a function of
//! `(N, mean, sse)` per coordinate, so these are the currency of the crate.
//! Sums use Neumaier compensation and merges use the pairwise update
//! `sse = sse_a + sse_b + (n_a n_b / n) (mean_a - mean_b)^2`.

use serde::{Deserialize, Serialize};

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Count, mean, and sum of squared deviations from the mean, per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuffStats {
    n: usize,
    mean: Vec<f64>,
    sse: Vec<f64>,
}

impl SuffStats {
    /// Statistics of zero observations in `dim` coordinates (all zeros).
    pub fn empty(dim: usize) -> Self {
        Self {
            n: 0,
            mean: vec![0.0; dim],
            sse: vec![0.0; dim],
        }
    }

    /// Assembles statistics from known values, e.g. when sampling them
    /// directly from their distribution.
    pub fn from_parts(n: usize, mean: Vec<f64>, sse: Vec<f64>) -> Self {
        assert_eq!(mean.len(), sse.len(), "mean and sse must have equal length");
        if n == 0 {
            let dim = mean.len();
            return Self::empty(dim);
        }
        Self { n, mean, sse }
    }

    /// Two-pass compensated statistics of the rows of a row-major `N x dim` buffer.
    pub fn from_rows(data: &[f64], dim: usize) -> Self {
        if dim == 0 {
            return Self::empty(0);
        }
        debug_assert_eq!(data.len() % dim, 0);
        let n = data.len() / dim;
        Self::from_row_iter(dim, n, |k| data.chunks_exact(dim).map(move |row| row[k]))
    }

    /// Statistics of a subset of rows given by index.
    pub fn from_indexed_rows(data: &[f64], dim: usize, rows: &[usize]) -> Self {
        Self::from_row_iter(dim, rows.len(), |k| {
            rows.iter().map(move |&i| data[i * dim + k])
        })
    }

    fn from_row_iter<'a, F, I>(dim: usize, n: usize, column: F) -> Self
    where
        F: Fn(usize) -> I,
        I: Iterator<Item = f64> + 'a,
    {
        if n == 0 {
            return Self::empty(dim);
        }
        let mut mean = Vec::with_capacity(dim);
        let mut sse = Vec::with_capacity(dim);
        for k in 0..dim {
            let m = column(k).collect::<CompensatedSum>().value() / n as f64;
            // second pass with the usual correction term for the residual of m
            let mut dev = CompensatedSum::default();
            let mut sq = CompensatedSum::default();
            for x in column(k) {
                let d = x - m;
                dev.add(d);
                sq.add(d * d);
            }
            let corr = dev.value();
            mean.push(m + corr / n as f64);
            sse.push((sq.value() - corr * corr / n as f64).max(0.0));
        }
        Self { n, mean, sse }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn sse(&self) -> &[f64] {
        &self.sse
    }

    /// Sum of squared deviations of coordinate `k` from an arbitrary center.
    pub fn sse_about(&self, k: usize, center: f64) -> f64 {
        let d = self.mean[k] - center;
        self.sse[k] + self.n as f64 * d * d
    }

    /// Welford update with one observation.
    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.dim());
        self.n += 1;
        let n = self.n as f64;
        for ((m, s), &x) in self.mean.iter_mut().zip(self.sse.iter_mut()).zip(row) {
            let delta = x - *m;
            *m += delta / n;
            *s += delta * (x - *m);
        }
    }

    /// Inverse of [`push`](Self::push). Removing the last observation resets
    /// to the empty statistics.
    pub fn remove(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.dim());
        assert!(self.n > 0, "cannot remove from empty statistics");
        if self.n == 1 {
            *self = Self::empty(self.dim());
            return;
        }
        let n_old = self.n as f64;
        self.n -= 1;
        let n = self.n as f64;
        for ((m, s), &x) in self.mean.iter_mut().zip(self.sse.iter_mut()).zip(row) {
            let m_new = (n_old * *m - x) / n;
            *s = (*s - (x - *m) * (x - m_new)).max(0.0);
            *m = m_new;
        }
    }

    /// Statistics of the union of two disjoint samples.
    pub fn merge(&self, other: &SuffStats) -> SuffStats {
        assert_eq!(self.dim(), other.dim());
        if self.n == 0 {
            return other.clone();
        }
        if other.n == 0 {
            return self.clone();
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let mut mean = Vec::with_capacity(self.dim());
        let mut sse = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let d = other.mean[k] - self.mean[k];
            mean.push(self.mean[k] + d * nb / n);
            sse.push(self.sse[k] + other.sse[k] + d * d * na * nb / n);
        }
        SuffStats {
            n: self.n + other.n,
            mean,
            sse,
        }
    }

    /// Statistics of `self` with the disjoint subsample `part` taken out.
    pub fn without(&self, part: &SuffStats) -> SuffStats {
        assert_eq!(self.dim(), part.dim());
        assert!(part.n <= self.n, "subsample larger than sample");
        if part.n == 0 {
            return self.clone();
        }
        if part.n == self.n {
            return SuffStats::empty(self.dim());
        }
        let (n, ng) = (self.n as f64, part.n as f64);
        let nt = n - ng;
        let mut mean = Vec::with_capacity(self.dim());
        let mut sse = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let mt = (n * self.mean[k] - ng * part.mean[k]) / nt;
            let d = mt - part.mean[k];
            mean.push(mt);
            sse.push((self.sse[k] - part.sse[k] - nt * ng / n * d * d).max(0.0));
        }
        SuffStats {
            n: self.n - part.n,
            mean,
            sse,
        }
    }
}
