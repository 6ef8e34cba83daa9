//! Quantum selection: optimal-region search, flag procedure and final
//! amplification.

mod coherent;
mod flag;
mod instance;
mod params;
mod region;
mod run;

pub use coherent::{
    canonical_estimate_law, coherent_flag_demo, median_law, median_repetitions, CoherentFlagDemo,
    MAX_DEMO_NOISE_QUBITS, MAX_DEMO_SOLUTIONS,
};
pub use flag::{flag_oracle, FlagAssignment, FlagMode, SogasConfig};
pub use instance::{ProblemInstance, Solution, MEAN_TOL};
pub use params::{FlagParams, RegionClass};
pub use region::{iteration_bound, optimal_region, region_search, Branch, Region, RegionOutcome, RegionStep};
pub use run::{final_flag_params, sogas_run, RunResult};
