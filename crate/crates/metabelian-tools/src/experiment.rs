//! Seeded, thread-count-independent Monte Carlo estimation of the
//! full-rank probability in the few-relators model.
//!
//! Every trial draws its presentation from a ChaCha stream keyed by
//! `(master_seed, ell, trial)`, so the outcome vector is a pure function of
//! the config; trials are farmed out with rayon and collected back in trial
//! order, making the result bitwise identical across thread counts.
//! Intervals are Wilson score intervals, which keep sane coverage in the
//! near-certainty regime this experiment lives in.

use std::fmt;

use metabelian::randgen::{sample_presentation, trial_rng};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

/// Parameters of one experiment sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub generators: usize,
    pub relators: usize,
    pub lengths: Vec<u32>,
    pub trials: u32,
    pub master_seed: u64,
    pub confidence: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.generators < 1 {
            return Err(ConfigError("need at least one generator".into()));
        }
        if self.relators < 1 {
            return Err(ConfigError("need at least one relator".into()));
        }
        if self.lengths.is_empty() {
            return Err(ConfigError("need at least one relator length".into()));
        }
        if self.lengths.iter().any(|&l| l < 1) {
            return Err(ConfigError("relator lengths must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(ConfigError("need at least one trial".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(ConfigError("confidence must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid experiment config: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Per-length tallies and interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub ell: u32,
    pub trials: u32,
    pub successes: u32,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
}

/// Two-sided normal quantile for the given confidence level.
pub fn z_for_confidence(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    normal.inverse_cdf(0.5 + confidence / 2.0)
}

/// Wilson score interval for `successes` out of `trials` at `confidence`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0);
    let z = z_for_confidence(confidence);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn run_one_trial(cfg: &ExperimentConfig, ell: u32, trial: u32) -> bool {
    let mut rng = trial_rng(cfg.master_seed, ell, trial);
    sample_presentation(cfg.generators, cfg.relators, ell, &mut rng).is_full_rank()
}

/// Run the sweep. Parallelism follows the ambient rayon pool; results do not
/// depend on it.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, ConfigError> {
    cfg.validate()?;
    let rows = cfg
        .lengths
        .iter()
        .map(|&ell| {
            let outcomes: Vec<bool> = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| run_one_trial(cfg, ell, trial))
                .collect();
            // Deterministic fold in trial-index order.
            let successes = outcomes.iter().filter(|&&hit| hit).count() as u32;
            let p_hat = successes as f64 / cfg.trials as f64;
            let (ci_low, ci_high) =
                wilson_interval(successes as u64, cfg.trials as u64, cfg.confidence);
            ExperimentRow {
                ell,
                trials: cfg.trials,
                successes,
                p_hat,
                ci_low,
                ci_high,
            }
        })
        .collect();
    Ok(ExperimentResult {
        config: cfg.clone(),
        rows,
    })
}

/// CSV rendering, one row per length.
pub fn render_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("n,m,ell,trials,successes,p_hat,ci_low,ci_high,seed\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            result.config.generators,
            result.config.relators,
            row.ell,
            row.trials,
            row.successes,
            row.p_hat,
            row.ci_low,
            row.ci_high,
            result.config.master_seed,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, m: usize, lengths: Vec<u32>, trials: u32, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            generators: n,
            relators: m,
            lengths,
            trials,
            master_seed: seed,
            confidence: 0.99,
        }
    }

    #[test]
    fn forced_full_rank_at_length_one() {
        // Every length-1 word over one generator has exponent sum ±1.
        let result = run_experiment(&cfg(1, 1, vec![1], 500, 7)).unwrap();
        assert_eq!(result.rows[0].successes, 500);
        assert_eq!(result.rows[0].p_hat, 1.0);
    }

    #[test]
    fn length_two_single_generator_ci_contains_half() {
        // Exact probability is 1/2 (two of the four sequences cancel).
        let result = run_experiment(&cfg(1, 1, vec![2], 10_000, 13)).unwrap();
        let row = &result.rows[0];
        assert!(row.ci_low <= 0.5 && 0.5 <= row.ci_high, "{:?}", row);
    }

    #[test]
    fn wilson_interval_basics() {
        let (lo, hi) = wilson_interval(8500, 10_000, 0.99);
        // Reference values from the closed form with z = 2.5758293035489004.
        assert!((lo - 0.840_570_503_805_992_7).abs() < 1e-9, "lo = {}", lo);
        assert!((hi - 0.858_965_361_380_585_4).abs() < 1e-9, "hi = {}", hi);

        let (lo, hi) = wilson_interval(10, 10, 0.95);
        assert!(lo > 0.6 && hi == 1.0);
        let (lo, hi) = wilson_interval(0, 10, 0.95);
        assert!(lo.abs() < 1e-12 && hi < 0.4);
    }

    #[test]
    fn z_quantile_matches_reference() {
        assert!((z_for_confidence(0.99) - 2.575_829_303_548_900_4).abs() < 1e-9);
        assert!((z_for_confidence(0.95) - 1.959_963_984_540_054).abs() < 1e-9);
    }

    #[test]
    fn repeat_runs_are_identical() {
        let c = cfg(2, 2, vec![2, 4], 400, 99);
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(render_csv(&a), render_csv(&b));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let c = cfg(2, 2, vec![3, 5], 500, 4242);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_experiment(&c).unwrap());
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| run_experiment(&c).unwrap());
        assert_eq!(render_csv(&single), render_csv(&many));
    }

    #[test]
    fn config_validation() {
        assert!(run_experiment(&cfg(0, 1, vec![1], 1, 0)).is_err());
        assert!(run_experiment(&cfg(1, 0, vec![1], 1, 0)).is_err());
        assert!(run_experiment(&cfg(1, 1, vec![], 1, 0)).is_err());
        assert!(run_experiment(&cfg(1, 1, vec![0], 1, 0)).is_err());
        assert!(run_experiment(&cfg(1, 1, vec![1], 0, 0)).is_err());
        let bad_conf = ExperimentConfig {
            confidence: 1.5,
            ..cfg(1, 1, vec![1], 1, 0)
        };
        assert!(run_experiment(&bad_conf).is_err());
    }
}
