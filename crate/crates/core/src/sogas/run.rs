use rand::Rng;

use super::flag::{flag_oracle, FlagAssignment, SogasConfig};
use super::instance::ProblemInstance;
use super::params::FlagParams;
use super::region::{optimal_region, Region, RegionStep};
use crate::error::{Error, Result};
use crate::qsub::{amplify, Phase, QueryLedger};

/// Result of one selection run.
#[derive(Debug, Clone)]
pub struct RunResult {
    /// Index of the returned solution; `None` if the method gave up.
    pub selected: Option<usize>,
    pub ledger: QueryLedger,
    pub final_region: Region,
    pub region_trace: Vec<RegionStep>,
    /// Whether `selected` is ε-optimal.
    pub correct: bool,
    /// Solutions labeled by the final flag step.
    pub flagged: Vec<usize>,
}

impl RunResult {
    pub fn total_queries(&self) -> u64 {
        self.ledger.total()
    }
}

/// Parameters of the final labeling step for region [a, b].
pub fn final_flag_params(region: Region, eps: f64, delta: f64, n: usize) -> Result<FlagParams> {
    let mut eta = region.width() / 4.0;
    if eta <= 0.0 {
        eta = eps / 8.0;
    }
    FlagParams::new(region.a - 0.75 * eta, eta, 0.01 * delta, n)
}

pub fn sogas_run<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    config: &SogasConfig,
    rng: &mut R,
) -> Result<RunResult> {
    config.validate()?;
    let eps = instance.eps();
    let delta = instance.delta();
    let mut ledger = QueryLedger::new();
    let outcome = optimal_region(instance, eps, delta / 2.0, config, &mut ledger, rng)?;
    let params = final_flag_params(outcome.region, eps, delta, instance.len())?;
    let labels: FlagAssignment = flag_oracle(&instance.oracles(), &params, config, &mut ledger, rng)?;
    let table = labels.table(config.flag_mode);
    let selected = match amplify(&table, delta / 2.0, &config.backend, &mut ledger, rng) {
        Ok(i) => i,
        Err(Error::PreconditionViolation(_)) => {
            let floor = 1.0 / instance.len() as f64;
            let charge = config.backend.amplify_charge(table.queries_per_invocation(), floor, delta / 2.0);
            ledger.charge(Phase::Amplify, charge);
            rng.gen_range(0..instance.len())
        }
        Err(e) => return Err(e),
    };
    Ok(RunResult {
        selected: Some(selected),
        correct: instance.is_eps_optimal(selected),
        ledger,
        final_region: outcome.region,
        region_trace: outcome.trace,
        flagged: table.flagged(),
    })
}
