use crate::dists::{build_oracle, DiscretizedDistribution, SolutionOracle};
use crate::error::{Error, Result};

/// Tolerance used when comparing exact means for ground-truth checks.
pub const MEAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Solution {
    pub id: String,
    oracle: SolutionOracle,
}

impl Solution {
    pub fn table(&self) -> &DiscretizedDistribution {
        self.oracle.table()
    }

    pub fn oracle(&self) -> &SolutionOracle {
        &self.oracle
    }

    pub fn mean(&self) -> f64 {
        self.oracle.exact_mean()
    }
}

/// A fixed-confidence selection problem: candidates, optimality gap ε and
/// risk δ.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    solutions: Vec<Solution>,
    eps: f64,
    delta: f64,
}

impl ProblemInstance {
    pub fn new(solutions: Vec<(String, DiscretizedDistribution)>, eps: f64, delta: f64) -> Result<Self> {
        if solutions.len() < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 solutions, got {}", solutions.len())));
        }
        check_unit("eps", eps)?;
        check_unit("delta", delta)?;
        let solutions = solutions
            .into_iter()
            .map(|(id, table)| Ok(Solution { id, oracle: build_oracle(&table)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { solutions, eps, delta })
    }

    /// Same candidates with a different optimality gap.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        check_unit("eps", eps)?;
        Ok(Self { eps, ..self.clone() })
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        check_unit("delta", delta)?;
        Ok(Self { delta, ..self.clone() })
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn solutions(&self) -> &[Solution] {
        &self.solutions
    }

    pub fn means(&self) -> Vec<f64> {
        self.solutions.iter().map(Solution::mean).collect()
    }

    pub fn best_mean(&self) -> f64 {
        self.solutions.iter().map(Solution::mean).fold(f64::NEG_INFINITY, f64::max)
    }

    /// y(x*) − y(x) ≤ ε.
    pub fn is_eps_optimal(&self, index: usize) -> bool {
        self.solutions
            .get(index)
            .is_some_and(|s| self.best_mean() - s.mean() <= self.eps + MEAN_TOL)
    }

    pub fn oracles(&self) -> Vec<&SolutionOracle> {
        self.solutions.iter().map(|s| &s.oracle).collect()
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} outside (0,1)")))
    }
}
