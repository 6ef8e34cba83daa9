use std::fmt;
use std::str::FromStr;

use sogas_core::csogas::{csogas_run, ClassicalEstimatorConfig};
use sogas_core::par;
use sogas_core::qsub::Phase;
use sogas_core::rng::{derive_seed, rng_from_seed};
use sogas_core::sogas::{sogas_run, Branch, ProblemInstance, RunResult, SogasConfig};

use crate::instances::{generate_instance, Family};
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Size,
    Gap,
    Distribution,
    Single,
}

impl FromStr for SweepKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "size" => Ok(Self::Size),
            "gap" => Ok(Self::Gap),
            "distribution" => Ok(Self::Distribution),
            "single" => Ok(Self::Single),
            _ => Err(HarnessError::Config(format!("unknown sweep '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Contract,
    StatevectorHybrid,
}

impl FromStr for Backend {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "contract" => Ok(Self::Contract),
            "statevector-hybrid" => Ok(Self::StatevectorHybrid),
            _ => Err(HarnessError::Config(format!("unknown backend '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Sogas,
    Csogas,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Sogas, Method::Csogas];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sogas => "SOGAS",
            Method::Csogas => "CSOGAS",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HarnessError::Config(format!("unknown method '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sweep: SweepKind,
    /// Sizes, inverse gaps or family names, depending on the sweep.
    pub values: Vec<String>,
    pub eps: f64,
    pub delta: f64,
    /// Solution count for gap, distribution and single sweeps.
    pub size: usize,
    /// Family for size, gap and single sweeps.
    pub family: Family,
    pub replications: usize,
    pub seed: u64,
    pub backend: Backend,
    pub cost_constant: f64,
    pub classical: ClassicalEstimatorConfig,
}

impl ExperimentConfig {
    pub const DEFAULT_REPLICATIONS: usize = 30;

    pub fn new(sweep: SweepKind, values: &[&str]) -> Self {
        Self {
            sweep,
            values: values.iter().map(|s| s.to_string()).collect(),
            eps: 0.1,
            delta: 0.05,
            size: if sweep == SweepKind::Gap { 25 } else { 10 },
            family: Family::Bernoulli,
            replications: Self::DEFAULT_REPLICATIONS,
            seed: 0,
            backend: Backend::StatevectorHybrid,
            cost_constant: 1.0,
            classical: ClassicalEstimatorConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.replications == 0 {
            return Err(HarnessError::Config("replications must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(HarnessError::Config(format!("delta = {} outside (0,1)", self.delta)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(HarnessError::Config(format!("epsilon = {} outside (0,1)", self.eps)));
        }
        if self.values.is_empty() && self.sweep != SweepKind::Single {
            return Err(HarnessError::Config("sweep values are empty".into()));
        }
        if !(self.cost_constant > 0.0 && self.cost_constant.is_finite()) {
            return Err(HarnessError::Config(format!("cost constant {}", self.cost_constant)));
        }
        self.classical.validate()?;
        self.points().map(|_| ())
    }

    pub fn sogas_config(&self) -> SogasConfig {
        match self.backend {
            Backend::Contract => SogasConfig::contract(self.cost_constant),
            Backend::StatevectorHybrid => SogasConfig::statevector_hybrid(),
        }
    }

    /// (label, family, size, eps) for every sweep point.
    pub fn points(&self) -> Result<Vec<SweepPoint>, HarnessError> {
        let parse_err = |v: &str| HarnessError::Config(format!("bad sweep value '{v}'"));
        match self.sweep {
            SweepKind::Single => Ok(vec![SweepPoint {
                label: self.values.first().cloned().unwrap_or_else(|| "single".into()),
                family: self.family,
                size: self.size,
                eps: self.eps,
            }]),
            SweepKind::Size => self
                .values
                .iter()
                .map(|v| {
                    let size: usize = v.parse().map_err(|_| parse_err(v))?;
                    if size < 2 {
                        return Err(HarnessError::Config(format!("size {size} < 2")));
                    }
                    Ok(SweepPoint { label: v.clone(), family: self.family, size, eps: self.eps })
                })
                .collect(),
            SweepKind::Gap => self
                .values
                .iter()
                .map(|v| {
                    let inv: f64 = v.parse().map_err(|_| parse_err(v))?;
                    if !(inv > 1.0 && inv.is_finite()) {
                        return Err(HarnessError::Config(format!("inverse gap {inv} must exceed 1")));
                    }
                    Ok(SweepPoint { label: v.clone(), family: self.family, size: self.size, eps: 1.0 / inv })
                })
                .collect(),
            SweepKind::Distribution => self
                .values
                .iter()
                .map(|v| Ok(SweepPoint { label: v.clone(), family: v.parse()?, size: self.size, eps: self.eps }))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub label: String,
    pub family: Family,
    pub size: usize,
    pub eps: f64,
}

impl SweepPoint {
    pub fn instance(&self, cfg: &ExperimentConfig) -> Result<ProblemInstance, HarnessError> {
        generate_instance(self.family, self.size, self.eps, cfg.delta, cfg.seed)
    }
}

/// Aggregate over the replications of one method at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub method: Method,
    pub sweep_value: String,
    pub mean_queries: f64,
    pub ci95: f64,
    pub pcs: f64,
    /// Mean queries per phase, in [`Phase::ALL`] order.
    pub phase_means: [f64; 5],
}

/// One row of the region-search trace output.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub method: Method,
    pub sweep_value: String,
    pub replication: usize,
    pub t: u32,
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub branch: Branch,
    pub next_a: f64,
    pub next_b: f64,
}

#[derive(Debug, Clone)]
pub struct Replication {
    pub method: Method,
    pub point: usize,
    pub index: usize,
    pub result: RunResult,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<ExperimentRow>,
    pub replications: Vec<Replication>,
}

impl SweepOutput {
    pub fn traces(&self, points: &[SweepPoint]) -> Vec<TraceRecord> {
        self.replications
            .iter()
            .flat_map(|rep| {
                rep.result.region_trace.iter().map(move |s| TraceRecord {
                    method: rep.method,
                    sweep_value: points[rep.point].label.clone(),
                    replication: rep.index,
                    t: s.t,
                    a: s.before.a,
                    b: s.before.b,
                    r: s.r,
                    branch: s.branch,
                    next_a: s.after.a,
                    next_b: s.after.b,
                })
            })
            .collect()
    }
}

/// Mean and 1.96·sd/√n half-width; the half-width is 0 for a single value.
pub fn mean_ci(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, 1.96 * var.sqrt() / (n as f64).sqrt())
}

pub fn replication_seed(base: u64, method: Method, value: &str, index: usize) -> u64 {
    derive_seed(base, &format!("{}/{}", method.name(), value), index as u64)
}

pub fn run_method(
    method: Method,
    instance: &ProblemInstance,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<RunResult, HarnessError> {
    let mut rng = rng_from_seed(seed);
    Ok(match method {
        Method::Sogas => sogas_run(instance, &cfg.sogas_config(), &mut rng)?,
        Method::Csogas => csogas_run(instance, &cfg.classical, &mut rng)?,
    })
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput, HarnessError> {
    cfg.validate()?;
    let points = cfg.points()?;
    let instances = points.iter().map(|p| p.instance(cfg)).collect::<Result<Vec<_>, _>>()?;
    let mut tasks = Vec::new();
    for (pi, point) in points.iter().enumerate() {
        for method in Method::ALL {
            for index in 0..cfg.replications {
                tasks.push((pi, method, index, replication_seed(cfg.seed, method, &point.label, index)));
            }
        }
    }
    let results = par::map_tasks(tasks, |(pi, method, index, seed)| {
        run_method(method, &instances[pi], cfg, seed)
            .map(|result| Replication { method, point: pi, index, result })
            .map_err(|e| HarnessError::Replication {
                method: method.name(),
                value: points[pi].label.clone(),
                index,
                source: Box::new(e),
            })
    });
    let replications = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    for (pi, point) in points.iter().enumerate() {
        for method in Method::ALL {
            let reps: Vec<&Replication> =
                replications.iter().filter(|r| r.point == pi && r.method == method).collect();
            let totals: Vec<f64> = reps.iter().map(|r| r.result.total_queries() as f64).collect();
            let (mean_queries, ci95) = mean_ci(&totals);
            let pcs = reps.iter().filter(|r| r.result.correct).count() as f64 / reps.len() as f64;
            let mut phase_means = [0.0; 5];
            for (slot, phase) in phase_means.iter_mut().zip(Phase::ALL) {
                *slot = reps.iter().map(|r| r.result.ledger.count(phase) as f64).sum::<f64>() / reps.len() as f64;
            }
            rows.push(ExperimentRow { method, sweep_value: point.label.clone(), mean_queries, ci95, pcs, phase_means });
        }
    }
    Ok(SweepOutput { rows, replications })
}

/// Least-squares slope of ln(y) against ln(x).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
