use std::fmt;
use std::str::FromStr;

use rand::Rng;
use sogas_core::dists::{DiscretizedDistribution, PerformanceDistribution};
use sogas_core::rng::{derive_seed, rng_from_seed};
use sogas_core::sogas::ProblemInstance;

use crate::HarnessError;

/// Noise qubits used for every continuous family.
pub const CONTINUOUS_K: usize = 3;
pub const BERNOULLI_RANGE: (f64, f64) = (0.78, 0.85);
pub const GAUSSIAN_RANGE: (f64, f64) = (0.46, 0.80);
pub const GAUSSIAN_SD: f64 = 0.08;
pub const UNIFORM_RANGE: (f64, f64) = (0.50, 0.81);
pub const UNIFORM_WIDTH: f64 = 0.3;
pub const EXPONENTIAL_RANGE: (f64, f64) = (0.62, 0.83);
pub const MIN_SEPARATION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Bernoulli,
    Gaussian,
    Uniform,
    Exponential,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Bernoulli, Family::Gaussian, Family::Uniform, Family::Exponential];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bernoulli => "bernoulli",
            Family::Gaussian => "gaussian",
            Family::Uniform => "uniform",
            Family::Exponential => "exponential",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HarnessError::Config(format!("unknown family '{s}'")))
    }
}

fn spaced(range: (f64, f64), i: usize, n: usize) -> f64 {
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// Truncated exponential on [0,1] whose discretized mean equals `target`.
pub fn exponential_with_mean(target: f64, k: usize) -> Result<DiscretizedDistribution, HarnessError> {
    let mean_at = |rate: f64| -> Result<f64, HarnessError> {
        Ok(PerformanceDistribution::TruncatedExponential { rate }.discretize(k)?.exact_mean())
    };
    // The mean decreases in the rate.
    let (mut lo, mut hi) = (-200.0, 200.0);
    if !(mean_at(hi)? <= target && target <= mean_at(lo)?) {
        return Err(HarnessError::Config(format!("exponential mean {target} unreachable with k = {k}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean_at(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(PerformanceDistribution::TruncatedExponential { rate: 0.5 * (lo + hi) }.discretize(k)?)
}

/// Distributions for `size` solutions of `family`; deterministic in `seed`.
pub fn family_tables(family: Family, size: usize, seed: u64) -> Result<Vec<DiscretizedDistribution>, HarnessError> {
    if size < 2 {
        return Err(HarnessError::Config(format!("instance size {size} < 2")));
    }
    match family {
        Family::Bernoulli => {
            let mut rng = rng_from_seed(derive_seed(seed, "instance/bernoulli", size as u64));
            let mut means: Vec<f64> = Vec::with_capacity(size);
            while means.len() < size {
                let m = rng.gen_range(BERNOULLI_RANGE.0..=BERNOULLI_RANGE.1);
                if means.iter().all(|&o| (o - m).abs() >= MIN_SEPARATION) {
                    means.push(m);
                }
            }
            means
                .into_iter()
                .map(|p| Ok(PerformanceDistribution::Bernoulli { p }.discretize(1)?))
                .collect()
        }
        Family::Gaussian => (0..size)
            .map(|i| {
                let center = spaced(GAUSSIAN_RANGE, i, size);
                Ok(PerformanceDistribution::TruncatedGaussian { center, sd: GAUSSIAN_SD }.discretize(CONTINUOUS_K)?)
            })
            .collect(),
        Family::Uniform => (0..size)
            .map(|i| {
                let mu = spaced(UNIFORM_RANGE, i, size);
                let d = PerformanceDistribution::Uniform { lo: mu - UNIFORM_WIDTH / 2.0, hi: mu + UNIFORM_WIDTH / 2.0 };
                Ok(d.discretize(CONTINUOUS_K)?)
            })
            .collect(),
        Family::Exponential => (0..size)
            .map(|i| exponential_with_mean(spaced(EXPONENTIAL_RANGE, i, size), CONTINUOUS_K))
            .collect(),
    }
}

pub fn generate_instance(
    family: Family,
    size: usize,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Result<ProblemInstance, HarnessError> {
    let tables = family_tables(family, size, seed)?;
    let named = tables.into_iter().enumerate().map(|(i, t)| (format!("{}{}", family.name(), i), t)).collect();
    Ok(ProblemInstance::new(named, eps, delta)?)
}
