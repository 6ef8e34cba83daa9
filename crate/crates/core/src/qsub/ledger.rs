use std::fmt;

/// Accounting bucket for oracle queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Flag-procedure executions inside the optimal-region search.
    OptimalRegion,
    /// Flag-procedure executions of the final labeling step.
    FlagQae,
    ProportionEstimate,
    Amplify,
    ClassicalSampling,
}

impl Phase {
    pub const ALL: [Phase; 5] = [
        Phase::OptimalRegion,
        Phase::FlagQae,
        Phase::ProportionEstimate,
        Phase::Amplify,
        Phase::ClassicalSampling,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Phase::OptimalRegion => "optimal_region",
            Phase::FlagQae => "flag_qae",
            Phase::ProportionEstimate => "proportion_estimate",
            Phase::Amplify => "amplify",
            Phase::ClassicalSampling => "classical_sampling",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-phase counts of oracle (or inverse-oracle) applications, or of
/// classical samples. Counts only grow.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLedger {
    counts: [u64; 5],
    redirect: Option<Phase>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Charges `n` queries to `phase`, or to the redirect phase while one is
    /// active.
    pub fn charge(&mut self, phase: Phase, n: u64) {
        let p = self.redirect.unwrap_or(phase);
        self.counts[p.index()] = self.counts[p.index()].saturating_add(n);
    }

    /// Runs `f` with every charge redirected to `phase`.
    pub fn redirected<T>(&mut self, phase: Phase, f: impl FnOnce(&mut Self) -> T) -> T {
        let previous = self.redirect.replace(phase);
        let out = f(self);
        self.redirect = previous;
        out
    }

    pub fn count(&self, phase: Phase) -> u64 {
        self.counts[phase.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn add(&mut self, other: &QueryLedger) {
        for p in Phase::ALL {
            self.counts[p.index()] += other.count(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_is_sum_of_phases_and_redirect_restores() {
        let mut l = QueryLedger::new();
        l.charge(Phase::Amplify, 5);
        l.redirected(Phase::OptimalRegion, |l| l.charge(Phase::FlagQae, 7));
        l.charge(Phase::FlagQae, 1);
        assert_eq!(l.count(Phase::OptimalRegion), 7);
        assert_eq!(l.count(Phase::FlagQae), 1);
        assert_eq!(l.total(), 13);
    }
}
