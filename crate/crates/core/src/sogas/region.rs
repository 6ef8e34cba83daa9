use std::fmt;

use rand::Rng;

use super::flag::{flag_oracle, FlagMode, SogasConfig};
use super::instance::ProblemInstance;
use super::params::FlagParams;
use crate::dists::{build_oracle, DiscretizedDistribution};
use crate::error::{Error, Result};
use crate::qsub::{estimate_proportion, Phase, QueryLedger};

/// Closed interval [a, b] of objective values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub a: f64,
    pub b: f64,
}

impl Region {
    pub const UNIT: Region = Region { a: 0.0, b: 1.0 };

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, y: f64) -> bool {
        self.a <= y && y <= self.b
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6}, {:.6}]", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Upper => "upper",
            Branch::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionStep {
    pub t: u32,
    pub before: Region,
    pub after: Region,
    pub r: f64,
    pub branch: Branch,
    pub params: FlagParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionOutcome {
    pub region: Region,
    pub trace: Vec<RegionStep>,
}

/// ⌈log_{16/11}(2/ε)⌉.
pub fn iteration_bound(eps: f64) -> u32 {
    let v = (2.0 / eps).ln() / (16.0f64 / 11.0).ln();
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r.max(0.0) as u32
    } else {
        v.ceil().max(0.0) as u32
    }
}

/// Binary search for a narrow interval around the best mean. `step` runs
/// one flag-and-estimate round over the `n_real + 1` augmented solutions and
/// returns the flagged-fraction estimate r_t.
pub fn region_search(
    eps: f64,
    delta: f64,
    n_real: usize,
    mut step: impl FnMut(u32, &FlagParams, f64) -> Result<f64>,
) -> Result<RegionOutcome> {
    if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps}, delta = {delta}")));
    }
    let n_aug = n_real + 1;
    let threshold = 3.0 / (2.0 * n_aug as f64);
    let guard = 2 * iteration_bound(eps).max(1);
    let mut region = Region::UNIT;
    let mut trace = Vec::new();
    let mut t = 0u32;
    while region.width() >= eps / 2.0 {
        if t >= guard {
            return Err(Error::Internal(format!("region search exceeded {guard} iterations")));
        }
        let eta = region.width() / 4.0;
        let ell = (region.a + region.b) / 2.0;
        let delta_t = delta / 2f64.powi(t as i32 + 1);
        let params = FlagParams::new(ell, eta, 0.1 * delta_t, n_aug)?;
        let r = step(t, &params, delta_t)?;
        let (after, branch) = if r > threshold {
            (Region { a: params.lower_threshold(), b: region.b }, Branch::Upper)
        } else {
            (Region { a: region.a, b: params.upper_threshold() }, Branch::Lower)
        };
        if after.width() > region.width() * 11.0 / 16.0 * (1.0 + 1e-12) {
            return Err(Error::Internal(format!("region {region} shrank only to {after}")));
        }
        trace.push(RegionStep { t, before: region, after, r, branch, params });
        region = after;
        t += 1;
    }
    Ok(RegionOutcome { region, trace })
}

/// Region search with the quantum flag procedure over the instance plus an
/// auxiliary solution whose output is always 1.
pub fn optimal_region<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    eps: f64,
    delta: f64,
    config: &SogasConfig,
    ledger: &mut QueryLedger,
    rng: &mut R,
) -> Result<RegionOutcome> {
    config.validate()?;
    let aux = build_oracle(&DiscretizedDistribution::point_mass_one())?;
    let mut oracles = instance.oracles();
    oracles.push(&aux);
    let n_aug = oracles.len();
    region_search(eps, delta, instance.len(), |_, params, delta_t| {
        let flags = ledger.redirected(Phase::OptimalRegion, |l| flag_oracle(&oracles, params, config, l, rng))?;
        match config.flag_mode {
            FlagMode::Hybrid => Ok(flags.flagged_count() as f64 / n_aug as f64),
            FlagMode::Coherent => {
                let table = flags.table(config.flag_mode);
                match estimate_proportion(&table, 0.1, delta_t, &config.backend, ledger, rng) {
                    Err(Error::PreconditionViolation(_)) => {
                        let floor = 1.0 / n_aug as f64;
                        let charge = config.backend.proportion_charge(table.queries_per_invocation(), 0.1, floor, delta_t);
                        ledger.charge(Phase::ProportionEstimate, charge);
                        Ok(0.0)
                    }
                    other => other,
                }
            }
        }
    })
}
