//! Numerical results bundled with their uncertainty.

use serde::Serialize;

/// A value with either a Monte Carlo standard error or, for deterministic
/// quadrature, a separate error bound (and stderr 0).
#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    /// Quadrature error bound, when the estimate is deterministic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

impl Estimate {
    pub fn monte_carlo(value: f64, stderr: f64, n_samples: u64, seed: u64) -> Self {
        Estimate {
            value,
            stderr,
            n_samples,
            seed,
            bound: None,
        }
    }

    pub fn quadrature(value: f64, bound: f64, n_nodes: u64) -> Self {
        Estimate {
            value,
            stderr: 0.0,
            n_samples: n_nodes,
            seed: 0,
            bound: Some(bound),
        }
    }

    /// |value - target| <= k_se * stderr + slack.
    pub fn within(&self, target: f64, k_se: f64, slack: f64) -> bool {
        (self.value - target).abs() <= k_se * self.stderr + slack
    }
}

/// Streaming mean/variance accumulator. Partials from separate chunks must
/// be merged in a fixed order for bit-reproducible results.
#[derive(Clone, Copy, Debug, Default)]
pub struct MeanAccumulator {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn merge(&mut self, other: &MeanAccumulator) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Standard error of the mean (0 for fewer than 2 samples).
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn into_estimate(self, seed: u64) -> Estimate {
        Estimate::monte_carlo(self.mean(), self.stderr(), self.n, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_matches_direct_formulas() {
        let data = [1.0, 2.0, 3.0, 4.0, 10.0];
        let mut acc = MeanAccumulator::default();
        for v in data {
            acc.push(v);
        }
        assert_eq!(acc.mean(), 4.0);
        // sample variance 12.5, se = sqrt(12.5/5)
        assert!((acc.stderr() - (12.5f64 / 5.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn merge_equals_sequential_push() {
        let mut a = MeanAccumulator::default();
        let mut b = MeanAccumulator::default();
        let mut whole = MeanAccumulator::default();
        for i in 0..10 {
            let v = (i * i) as f64;
            if i < 6 {
                a.push(v)
            } else {
                b.push(v)
            }
            whole.push(v);
        }
        a.merge(&b);
        assert_eq!(a.mean().to_bits(), whole.mean().to_bits());
        assert_eq!(a.stderr().to_bits(), whole.stderr().to_bits());
    }
}
