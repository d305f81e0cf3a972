//! Exact accumulation of integer-valued trial statistics.
//!
//! All per-trial quantities produced by the simulators are small integers
//! (outcome products, CHSH row sums, indicators). Summing them in integer
//! arithmetic makes the reduction associative, so a parallel fold yields the
//! same bits as a sequential loop.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub n: u64,
    pub sum: i64,
    pub sum_sq: u64,
    /// Trials discarded by a tie-exclusion guard.
    pub excluded: u64,
}

impl Tally {
    pub fn push(&mut self, value: i64) {
        self.n += 1;
        self.sum += value;
        self.sum_sq += value.unsigned_abs().pow(2);
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.excluded += other.excluded;
        self
    }

    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.n as f64
    }

    /// Standard error of the mean from the sample standard deviation.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let s = self.sum as f64;
        let var = ((self.sum_sq as f64 - s * s / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn estimate(&self, analytic: Option<f64>) -> CorrelationEstimate {
        CorrelationEstimate {
            mean: self.mean(),
            stderr: self.stderr(),
            n: self.n,
            analytic,
            excluded: self.excluded,
        }
    }
}

/// Monte Carlo mean with its standard error and the analytic reference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub analytic: Option<f64>,
    #[serde(skip)]
    pub excluded: u64,
}

impl CorrelationEstimate {
    /// Distance to the analytic value in units of the standard error.
    /// `None` without an analytic value; infinite when the estimate has zero
    /// spread but misses the reference.
    pub fn z_score(&self) -> Option<f64> {
        let a = self.analytic?;
        let d = (self.mean - a).abs();
        Some(if d == 0.0 { 0.0 } else { d / self.stderr })
    }

    pub fn within_sigmas(&self, k: f64) -> bool {
        self.z_score().is_some_and(|z| z <= k)
    }
}

/// Monte Carlo run parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    /// Folds `trial(i)` over `0..trials`. `trial` returns `None` for an
    /// excluded trial.
    pub fn run<F>(&self, trial: F) -> Result<Tally>
    where
        F: Fn(u64) -> Option<i64> + Sync + Send,
    {
        if self.trials == 0 {
            return Err(Error::ZeroTrials);
        }
        let fold = || {
            (0..self.trials)
                .into_par_iter()
                .fold(Tally::default, |mut t, i| {
                    match trial(i) {
                        Some(v) => t.push(v),
                        None => t.excluded += 1,
                    }
                    t
                })
                .reduce(Tally::default, Tally::merge)
        };
        match self.workers {
            None => Ok(fold()),
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::ThreadPool(e.to_string()))
                .map(|pool| pool.install(fold)),
        }
    }
}
