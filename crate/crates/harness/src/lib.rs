//! Experiment sweeps comparing the quantum selection procedure with its
//! classical counterpart, plus CSV, chart and instance-file I/O.

pub mod demo;
pub mod experiment;
pub mod instance_file;
pub mod instances;
pub mod output;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] sogas_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{method} at {value}, replication {index}: {source}")]
    Replication { method: &'static str, value: String, index: usize, source: Box<HarnessError> },
}

impl HarnessError {
    /// 1 for configuration problems, 2 for failures inside a run.
    pub fn exit_code(&self) -> i32 {
        use sogas_core::Error as E;
        match self {
            HarnessError::Config(_) | HarnessError::Io { .. } => 1,
            HarnessError::Core(E::InvalidParameter(_) | E::InvalidDistribution(_) | E::Layout(_)) => 1,
            HarnessError::Core(_) => 2,
            HarnessError::Replication { .. } => 2,
        }
    }
}
