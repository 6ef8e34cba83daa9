use rand::Rng;

use super::params::{FlagParams, RegionClass};
use crate::dists::SolutionOracle;
use crate::error::{Error, Result};
use crate::qsub::{qae_mean, BackendMode, FlagTable, Phase, QueryLedger, SubroutineBackend};

/// How one execution of the flag procedure is costed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagMode {
    /// All solutions are estimated in one coherent execution; it costs
    /// one per-solution estimate and downstream subroutines reuse it as T_A.
    Coherent,
    /// Each solution is estimated separately and the labels are read out
    /// classically; downstream subroutines then need no oracle queries.
    Hybrid,
}

/// Backend plus flag costing used by a SOGAS run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SogasConfig {
    pub backend: SubroutineBackend,
    pub flag_mode: FlagMode,
}

impl SogasConfig {
    pub fn contract(cost_constant: f64) -> Self {
        Self { backend: SubroutineBackend::contract(cost_constant), flag_mode: FlagMode::Coherent }
    }

    pub fn statevector_hybrid() -> Self {
        Self { backend: SubroutineBackend::statevector(), flag_mode: FlagMode::Hybrid }
    }

    pub fn validate(&self) -> Result<()> {
        self.backend.validate()?;
        if self.flag_mode == FlagMode::Coherent && self.backend.mode == BackendMode::Statevector {
            return Err(Error::InvalidParameter(
                "coherent flag costing needs the contract backend".into(),
            ));
        }
        Ok(())
    }
}

/// Labels produced by one flag execution, with the ground-truth class of
/// every solution.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagAssignment {
    pub flags: Vec<bool>,
    pub estimates: Vec<f64>,
    pub classes: Vec<RegionClass>,
    /// Query cost T_A of one execution.
    pub queries: u64,
}

impl FlagAssignment {
    /// Table for amplification or proportion estimation. Hybrid labels are
    /// classical, so re-reading them costs nothing.
    pub fn table(&self, mode: FlagMode) -> FlagTable {
        let t_a = match mode {
            FlagMode::Coherent => self.queries,
            FlagMode::Hybrid => 0,
        };
        FlagTable::new(self.flags.clone(), t_a)
    }

    pub fn flagged_count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    /// Labels that contradict the class (S1 unflagged or S2 flagged).
    pub fn mislabeled(&self) -> usize {
        self.flags
            .iter()
            .zip(&self.classes)
            .filter(|(&f, &c)| matches!((c, f), (RegionClass::S1, false) | (RegionClass::S2, true)))
            .count()
    }
}

/// Estimates every mean to 2^{-m}/3 with risk α and flags solutions whose
/// estimate reaches the midpoint between the thresholds. Charges
/// [`Phase::FlagQae`].
pub fn flag_oracle<R: Rng + ?Sized>(
    oracles: &[&SolutionOracle],
    params: &FlagParams,
    config: &SogasConfig,
    ledger: &mut QueryLedger,
    rng: &mut R,
) -> Result<FlagAssignment> {
    config.validate()?;
    if oracles.len() != params.n_solutions {
        return Err(Error::InvalidParameter(format!(
            "flag parameters sized for {} solutions, got {}",
            params.n_solutions,
            oracles.len()
        )));
    }
    let eps = params.estimate_precision();
    let alpha = params.alpha;
    let midpoint = params.midpoint();
    let mut estimates = Vec::with_capacity(oracles.len());
    let queries = match config.flag_mode {
        FlagMode::Coherent => {
            let mut scratch = QueryLedger::new();
            for o in oracles {
                estimates.push(qae_mean(o, eps, alpha, &config.backend, &mut scratch, rng)?);
            }
            let t_a = config.backend.mean_estimation_charge(eps, alpha);
            ledger.charge(Phase::FlagQae, t_a);
            t_a
        }
        FlagMode::Hybrid => {
            let mut local = QueryLedger::new();
            for o in oracles {
                estimates.push(qae_mean(o, eps, alpha, &config.backend, &mut local, rng)?);
            }
            ledger.charge(Phase::FlagQae, local.total());
            local.total()
        }
    };
    let flags = estimates.iter().map(|&e| e >= midpoint).collect();
    let classes = oracles.iter().map(|o| params.classify(o.exact_mean())).collect();
    Ok(FlagAssignment { flags, estimates, classes, queries })
}
