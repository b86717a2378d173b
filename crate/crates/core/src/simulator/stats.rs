use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`; 0 for one trial.
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Compensated (Neumaier) sum; the result depends only on the order of
/// `values`, which callers keep fixed by trial index.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl Estimate {
    /// Mean and standard error of per-trial values, in trial order.
    pub fn from_samples(values: &[f64], seed: u64) -> Self {
        let n = values.len();
        if n == 0 {
            return Estimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                trials: 0,
                seed,
            };
        }
        let mean = neumaier_sum(values.iter().copied()) / n as f64;
        let stderr = if n > 1 {
            let ss = neumaier_sum(values.iter().map(|v| (v - mean) * (v - mean)));
            (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            stderr,
            trials: n as u64,
            seed,
        }
    }

    /// `mean - k·stderr`.
    pub fn lower(&self, k: f64) -> f64 {
        self.mean - k * self.stderr
    }

    /// `mean + k·stderr`.
    pub fn upper(&self, k: f64) -> f64 {
        self.mean + k * self.stderr
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let e = Estimate::from_samples(&[1.0, 0.0, 1.0, 0.0], 3);
        assert_eq!(e.mean, 0.5);
        let sd = (1.0f64 / 3.0).sqrt();
        assert!((e.stderr - sd / 2.0).abs() < 1e-15);
        assert_eq!(e.trials, 4);
        assert_eq!(Estimate::from_samples(&[0.7], 0).stderr, 0.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(values), 2.0);
    }
}
