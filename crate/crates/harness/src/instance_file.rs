//! Text format for single problem instances.
//!
//! ```text
//! # id kind p1 [p2]
//! a bernoulli 0.80
//! b gaussian 0.6 0.08
//! c uniform 0.4 0.9
//! d exponential -2.5
//! ```

use sogas_core::dists::{PerformanceDistribution, DEFAULT_NOISE_QUBITS};
use sogas_core::sogas::ProblemInstance;

use crate::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceEntry {
    pub id: String,
    pub dist: PerformanceDistribution,
}

fn line_err(no: usize, msg: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(format!("line {no}: {msg}"))
}

pub fn parse_entries(text: &str) -> Result<Vec<InstanceEntry>, HarnessError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(line_err(no, "expected `id kind p1 [p2]`"));
        }
        let nums = fields[2..]
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| line_err(no, format!("bad number '{s}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        let arity = |n: usize| if nums.len() == n { Ok(()) } else { Err(line_err(no, format!("{} takes {n} parameter(s)", fields[1]))) };
        let dist = match fields[1].to_ascii_lowercase().as_str() {
            "bernoulli" => {
                arity(1)?;
                PerformanceDistribution::Bernoulli { p: nums[0] }
            }
            "gaussian" => {
                arity(2)?;
                PerformanceDistribution::TruncatedGaussian { center: nums[0], sd: nums[1] }
            }
            "uniform" => {
                arity(2)?;
                PerformanceDistribution::Uniform { lo: nums[0], hi: nums[1] }
            }
            "exponential" => {
                arity(1)?;
                PerformanceDistribution::TruncatedExponential { rate: nums[0] }
            }
            other => return Err(line_err(no, format!("unknown kind '{other}'"))),
        };
        dist.validate().map_err(|e| line_err(no, e))?;
        if out.iter().any(|e: &InstanceEntry| e.id == fields[0]) {
            return Err(line_err(no, format!("duplicate id '{}'", fields[0])));
        }
        out.push(InstanceEntry { id: fields[0].to_string(), dist });
    }
    Ok(out)
}

pub fn parse_instance(text: &str, eps: f64, delta: f64) -> Result<ProblemInstance, HarnessError> {
    let entries = parse_entries(text)?;
    let tables = entries
        .into_iter()
        .map(|e| {
            let k = match e.dist {
                PerformanceDistribution::Bernoulli { .. } => 1,
                _ => DEFAULT_NOISE_QUBITS,
            };
            Ok((e.id, e.dist.discretize(k)?))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(ProblemInstance::new(tables, eps, delta)?)
}
