//! Grover adaptive search for fixed-confidence discrete simulation
//! optimization.
//!
//! The crate is layered bottom-up:
//!
//! * [`qcore`]: a dense statevector kernel with gates and measurement.
//! * [`dists`]: bounded performance models, their 2^k-point discretization,
//!   classical sampling and the amplitude-loading oracle of one solution.
//! * [`qsub`]: mean estimation, amplitude amplification and proportion
//!   estimation, each with an exact statevector backend and a contract
//!   backend that samples from the proven (ε, δ) guarantee and charges the
//!   closed-form query cost.
//! * [`sogas`]: the flag oracle, the optimal-region binary search and the
//!   full selection procedure, plus a coherent flag demonstration on tiny
//!   instances.
//! * [`csogas`]: the classical counterpart driven by sample averages under a
//!   Hoeffding-capped empirical-Bernstein budget.

pub mod csogas;
pub mod dists;
pub mod error;
mod numeric;
pub mod par;
pub mod qcore;
pub mod qsub;
pub mod rng;
pub mod sogas;

pub use error::{Error, Result};
