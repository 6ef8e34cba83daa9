//! Classical counterpart of the quantum selection procedure: the same region
//! search and flag rule, with every mean estimated from samples.

use rand::Rng;

use crate::dists::{DiscretizedDistribution, SolutionOracle};
use crate::error::{Error, Result};
use crate::numeric::ceil_snap;
use crate::qsub::{Phase, QueryLedger};
use crate::sogas::{final_flag_params, region_search, FlagParams, ProblemInstance, RunResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalEstimatorConfig {
    /// Fraction of the Hoeffding budget drawn before the first check.
    pub initial_fraction: f64,
    pub batch: u64,
    /// Multiplier on the variance term of the stopping rule.
    pub variance_slack: f64,
}

impl Default for ClassicalEstimatorConfig {
    fn default() -> Self {
        Self { initial_fraction: 0.1, batch: 16, variance_slack: 1.0 }
    }
}

impl ClassicalEstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_fraction > 0.0 && self.initial_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!("initial fraction {}", self.initial_fraction)));
        }
        if self.batch == 0 {
            return Err(Error::InvalidParameter("batch size 0".into()));
        }
        if !(self.variance_slack >= 1.0) || !self.variance_slack.is_finite() {
            return Err(Error::InvalidParameter(format!("variance slack {}", self.variance_slack)));
        }
        Ok(())
    }
}

/// ⌈ln(2/δ) / (2ε²)⌉.
pub fn hoeffding_bound(eps: f64, delta: f64) -> u64 {
    ceil_snap((2.0 / delta).ln() / (2.0 * eps * eps))
}

/// √(2·s·V·L/n) + 3L/n with L = ln(3/δ).
pub fn bernstein_half_width(variance: f64, n: u64, delta: f64, slack: f64) -> f64 {
    let l = (3.0 / delta).ln();
    let n = n as f64;
    (2.0 * slack * variance * l / n).sqrt() + 3.0 * l / n
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalEstimate {
    pub mean: f64,
    pub samples: u64,
    pub half_width: f64,
}

/// Sample-average estimate within `eps` with probability at least
/// 1 − `delta`, never drawing more than the Hoeffding budget. Charges
/// [`Phase::ClassicalSampling`].
pub fn classical_mean<R: Rng + ?Sized>(
    table: &DiscretizedDistribution,
    eps: f64,
    delta: f64,
    cfg: &ClassicalEstimatorConfig,
    ledger: &mut QueryLedger,
    rng: &mut R,
) -> Result<ClassicalEstimate> {
    cfg.validate()?;
    if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps}, delta = {delta}")));
    }
    let cap = hoeffding_bound(eps, delta);
    let n0 = ceil_snap(cfg.initial_fraction * cap as f64).clamp(1, cap);
    let l = (3.0 / delta).ln();
    let points = table.points();
    let mut counts = vec![0u64; points.len()];
    let mut n = 0u64;
    let mut target = n0;
    loop {
        for (c, d) in counts.iter_mut().zip(table.sample_counts(target - n, rng)) {
            *c += d;
        }
        n = target;
        let (mean, var) = moments(points, &counts, n);
        let half = bernstein_half_width(var, n, delta, cfg.variance_slack);
        if half <= eps || n >= cap {
            ledger.charge(Phase::ClassicalSampling, n);
            return Ok(ClassicalEstimate { mean, samples: n, half_width: half });
        }
        // The biased variance after m more draws is at least n·V/(n+m), so
        // no check can pass before this sample size.
        let reachable = ((2.0 * l * cfg.variance_slack * n as f64 * var).sqrt() + 3.0 * l) / eps;
        let earliest = (reachable.ceil() as u64).max(n + 1);
        let steps = (earliest - n0).div_ceil(cfg.batch);
        target = (n0 + steps * cfg.batch).min(cap);
    }
}

fn moments(points: &[f64], counts: &[u64], n: u64) -> (f64, f64) {
    let nf = n as f64;
    let mean = points.iter().zip(counts).map(|(&y, &c)| y * c as f64).sum::<f64>() / nf;
    let var = points
        .iter()
        .zip(counts)
        .map(|(&y, &c)| c as f64 * (y - mean) * (y - mean))
        .sum::<f64>()
        / nf;
    (mean, var.max(0.0))
}

fn classical_flags<R: Rng + ?Sized>(
    tables: &[&DiscretizedDistribution],
    params: &FlagParams,
    cfg: &ClassicalEstimatorConfig,
    ledger: &mut QueryLedger,
    rng: &mut R,
) -> Result<Vec<bool>> {
    let midpoint = params.midpoint();
    tables
        .iter()
        .map(|t| Ok(classical_mean(t, params.estimate_precision(), params.alpha, cfg, ledger, rng)?.mean >= midpoint))
        .collect()
}

pub fn csogas_run<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    cfg: &ClassicalEstimatorConfig,
    rng: &mut R,
) -> Result<RunResult> {
    cfg.validate()?;
    let eps = instance.eps();
    let delta = instance.delta();
    let aux = DiscretizedDistribution::point_mass_one();
    let mut tables: Vec<&DiscretizedDistribution> = instance.oracles().into_iter().map(SolutionOracle::table).collect();
    tables.push(&aux);
    let mut ledger = QueryLedger::new();
    let outcome = region_search(eps, delta / 2.0, instance.len(), |_, params, _| {
        let flags = classical_flags(&tables, params, cfg, &mut ledger, rng)?;
        Ok(flags.iter().filter(|&&f| f).count() as f64 / flags.len() as f64)
    })?;
    tables.pop();

    let mut params = final_flag_params(outcome.region, eps, delta, instance.len())?;
    let mut flagged = flagged_indices(&classical_flags(&tables, &params, cfg, &mut ledger, rng)?);
    if flagged.is_empty() {
        params = FlagParams::new(params.ell, (2.0 * params.eta).min(1.0), params.kappa, params.n_solutions)?;
        flagged = flagged_indices(&classical_flags(&tables, &params, cfg, &mut ledger, rng)?);
    }
    let selected = (!flagged.is_empty()).then(|| flagged[rng.gen_range(0..flagged.len())]);
    Ok(RunResult {
        selected,
        correct: selected.is_some_and(|i| instance.is_eps_optimal(i)),
        ledger,
        final_region: outcome.region,
        region_trace: outcome.trace,
        flagged,
    })
}

fn flagged_indices(flags: &[bool]) -> Vec<usize> {
    flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect()
}
