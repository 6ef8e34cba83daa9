//! Quantum subroutines with (ε, δ) contracts and query accounting: mean
//! estimation, amplitude amplification and proportion estimation.
//!
//! Two interchangeable backends:
//!
//! * `Statevector` runs the circuits on [`crate::qcore`] and charges every
//!   application of the oracle (or its inverse) that the run actually makes.
//! * `Contract` skips the circuit. With probability 1 − δ it returns a value
//!   satisfying the precision guarantee, otherwise an uninformative draw, and
//!   charges the closed-form cost with multiplier `c`.

mod grover;
mod ledger;

use std::sync::Arc;

use rand::Rng;

pub use grover::{
    amplify_unknown, iterative_amplitude_estimation, AmplifyOutcome, EstimateOutcome, GroverProblem,
    GroverRunner, Precision,
};
pub use ledger::{Phase, QueryLedger};

use crate::dists::SolutionOracle;
use crate::error::{Error, Result};
use crate::numeric::ceil_snap;
use crate::qcore::{amplitude_loading, Circuit, Gate, QubitLayout, RegisterName};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendMode {
    Statevector,
    Contract,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubroutineBackend {
    pub mode: BackendMode,
    /// Multiplier inside the contract-mode cost formulas.
    pub cost_constant: f64,
    /// Shots per amplitude-estimation round (statevector mode).
    pub shots_per_round: u64,
}

impl SubroutineBackend {
    pub const DEFAULT_SHOTS: u64 = 100;

    pub fn contract(cost_constant: f64) -> Self {
        Self { mode: BackendMode::Contract, cost_constant, shots_per_round: Self::DEFAULT_SHOTS }
    }

    pub fn statevector() -> Self {
        Self { mode: BackendMode::Statevector, cost_constant: 1.0, shots_per_round: Self::DEFAULT_SHOTS }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cost_constant > 0.0) || !self.cost_constant.is_finite() {
            return Err(Error::InvalidParameter(format!("cost constant {}", self.cost_constant)));
        }
        Ok(())
    }

    /// ⌈c · (1/ε) · ln(1/δ)⌉.
    pub fn mean_estimation_charge(&self, eps: f64, delta: f64) -> u64 {
        ceil_snap(self.cost_constant / eps * (1.0 / delta).ln())
    }

    /// ⌈c · (T_A / √p) · ln(1/δ)⌉.
    pub fn amplify_charge(&self, t_a: u64, p_label: f64, delta: f64) -> u64 {
        ceil_snap(self.cost_constant * t_a as f64 / p_label.sqrt() * (1.0 / delta).ln())
    }

    /// ⌈c · (T_A / (ρ √p)) · ln(1/δ)⌉.
    pub fn proportion_charge(&self, t_a: u64, rel_eps: f64, p_label: f64, delta: f64) -> u64 {
        ceil_snap(self.cost_constant * t_a as f64 / (rel_eps * p_label.sqrt()) * (1.0 / delta).ln())
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} outside (0,1)")))
    }
}

/// Uniform draw from [lo, hi] ∩ [0, 1].
fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let (lo, hi) = (lo.max(0.0), hi.min(1.0));
    if hi <= lo {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Mean estimate of the objective qubit of `oracle`, within `eps` with
/// probability at least 1 − `delta`. Charges [`Phase::FlagQae`].
pub fn qae_mean<R: Rng + ?Sized>(
    oracle: &SolutionOracle,
    eps: f64,
    delta: f64,
    backend: &SubroutineBackend,
    ledger: &mut QueryLedger,
    rng: &mut R,
) -> Result<f64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    match backend.mode {
        BackendMode::Contract => {
            let mu = oracle.exact_mean();
            ledger.charge(Phase::FlagQae, backend.mean_estimation_charge(eps, delta));
            Ok(if rng.gen::<f64>() < delta {
                rng.gen::<f64>()
            } else {
                uniform_in(rng, mu - eps, mu + eps)
            })
        }
        BackendMode::Statevector => {
            let objective = oracle.objective_qubit();
            let problem = GroverProblem::new(oracle.layout().clone(), oracle.prep().clone(), move |i| {
                (i >> objective) & 1 == 1
            });
            let out = iterative_amplitude_estimation(
                &problem,
                Precision::Additive(eps),
                delta,
                backend.shots_per_round,
                rng,
            )?;
            ledger.charge(Phase::FlagQae, out.prep_calls);
            Ok(out.estimate.clamp(0.0, 1.0))
        }
    }
}

/// Output of a flag procedure over `len()` equally weighted elements, plus
/// the query cost of one execution of that procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagTable {
    flags: Arc<Vec<bool>>,
    queries_per_invocation: u64,
}

impl FlagTable {
    pub fn new(flags: Vec<bool>, queries_per_invocation: u64) -> Self {
        Self { flags: Arc::new(flags), queries_per_invocation }
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn flagged(&self) -> Vec<usize> {
        self.flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect()
    }

    /// Squared norm of the flagged subspace: flagged count / element count.
    pub fn label_mass(&self) -> f64 {
        if self.flags.is_empty() {
            return 0.0;
        }
        self.flags.iter().filter(|&&f| f).count() as f64 / self.flags.len() as f64
    }

    pub fn queries_per_invocation(&self) -> u64 {
        self.queries_per_invocation
    }

    /// Circuit preparing (1/√n) Σ_x |x⟩_X |flag(x)⟩_F.
    pub fn grover_problem(&self) -> Result<GroverProblem> {
        let n = self.flags.len();
        if n == 0 {
            return Err(Error::PreconditionViolation("flag table is empty".into()));
        }
        let width = (usize::BITS - (n - 1).leading_zeros()).max(1) as usize;
        let layout = QubitLayout::new(&[(RegisterName::X, width), (RegisterName::F, 1)])?;
        let x = *layout.register(RegisterName::X)?;
        let f_qubit = layout.register(RegisterName::F)?.offset;
        let mut probs = vec![0.0; 1 << width];
        probs[..n].iter_mut().for_each(|p| *p = 1.0 / n as f64);
        let xq: Vec<usize> = x.qubits().collect();
        let mut prep: Circuit = amplitude_loading(&xq, &probs)?;
        let flags = Arc::clone(&self.flags);
        prep.push(Gate::bit_flip(f_qubit, move |i| {
            let v = x.value_of(i);
            v < flags.len() && flags[v]
        }));
        Ok(GroverProblem::new(layout, prep, move |i| (i >> f_qubit) & 1 == 1))
    }
}

/// Flagged element with probability at least 1 − `delta`. Charges
/// [`Phase::Amplify`].
pub fn amplify<R: Rng + ?Sized>(
    table: &FlagTable,
    delta: f64,
    backend: &SubroutineBackend,
    ledger: &mut QueryLedger,
    rng: &mut R,
) -> Result<usize> {
    check_unit("delta", delta)?;
    let flagged = table.flagged();
    match backend.mode {
        BackendMode::Contract => {
            if flagged.is_empty() {
                return Err(Error::PreconditionViolation("amplify called with no flagged element".into()));
            }
            let p = table.label_mass();
            ledger.charge(Phase::Amplify, backend.amplify_charge(table.queries_per_invocation, p, delta));
            Ok(if rng.gen::<f64>() < delta {
                rng.gen_range(0..table.len())
            } else {
                flagged[rng.gen_range(0..flagged.len())]
            })
        }
        BackendMode::Statevector => {
            let problem = table.grover_problem()?;
            let out = amplify_unknown(&problem, delta, rng)?;
            ledger.charge(Phase::Amplify, out.prep_calls * table.queries_per_invocation);
            let x = problem.layout().register(RegisterName::X)?;
            Ok(x.value_of(out.index))
        }
    }
}

/// Estimate r of the flagged mass p with |r − p| ≤ `rel_eps`·p, with
/// probability at least 1 − `delta`. Charges [`Phase::ProportionEstimate`].
pub fn estimate_proportion<R: Rng + ?Sized>(
    table: &FlagTable,
    rel_eps: f64,
    delta: f64,
    backend: &SubroutineBackend,
    ledger: &mut QueryLedger,
    rng: &mut R,
) -> Result<f64> {
    check_unit("rel_eps", rel_eps)?;
    check_unit("delta", delta)?;
    let p = table.label_mass();
    if p <= 0.0 {
        return Err(Error::PreconditionViolation("proportion estimate needs a flagged element".into()));
    }
    match backend.mode {
        BackendMode::Contract => {
            ledger.charge(
                Phase::ProportionEstimate,
                backend.proportion_charge(table.queries_per_invocation, rel_eps, p, delta),
            );
            Ok(if rng.gen::<f64>() < delta {
                rng.gen::<f64>()
            } else {
                uniform_in(rng, p * (1.0 - rel_eps), p * (1.0 + rel_eps))
            })
        }
        BackendMode::Statevector => {
            let problem = table.grover_problem()?;
            let out = iterative_amplitude_estimation(
                &problem,
                Precision::Relative(rel_eps),
                delta,
                backend.shots_per_round,
                rng,
            )?;
            ledger.charge(Phase::ProportionEstimate, out.prep_calls * table.queries_per_invocation);
            Ok(out.estimate.clamp(0.0, 1.0))
        }
    }
}
