//! Statevector amplitude estimation and amplification over an arbitrary
//! preparation circuit `A` with a "good" subspace.
//!
//! The Grover operator is Q = A (2|0⟩⟨0| − I) A† S_good, so that the good
//! probability after `A Q^k |0⟩` is sin²((2k+1)θ) with a = sin²θ. Each shot
//! at power k applies `A` or `A†` exactly 2k + 1 times.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::qcore::{Circuit, Gate, QubitLayout, StateVector};

/// Preparation circuit plus the predicate marking good basis states.
#[derive(Clone)]
pub struct GroverProblem {
    layout: QubitLayout,
    prep: Circuit,
    prep_inverse: Circuit,
    good: Arc<dyn Fn(usize) -> bool + Send + Sync>,
}

impl GroverProblem {
    pub fn new(
        layout: QubitLayout,
        prep: Circuit,
        good: impl Fn(usize) -> bool + Send + Sync + 'static,
    ) -> Self {
        let prep_inverse = prep.inverse();
        Self { layout, prep, prep_inverse, good: Arc::new(good) }
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    /// Incremental simulator of A Q^k |0⟩.
    pub fn runner(&self) -> Result<GroverRunner<'_>> {
        let mut base = StateVector::zero(self.layout.clone());
        self.prep.apply(&mut base)?;
        Ok(GroverRunner { problem: self, current: base.clone(), base, power: 0 })
    }

    pub fn good_probability(&self, state: &StateVector) -> f64 {
        let good = &self.good;
        state.probability_where(|i| good(i))
    }

    fn grover_step(&self, state: &mut StateVector) -> Result<()> {
        let good = Arc::clone(&self.good);
        state.apply(&Gate::phase_flip(move |i| good(i)))?;
        self.prep_inverse.apply(state)?;
        state.reflect_zero(self.layout.dim() - 1);
        self.prep.apply(state)
    }
}

pub struct GroverRunner<'a> {
    problem: &'a GroverProblem,
    base: StateVector,
    current: StateVector,
    power: u64,
}

impl GroverRunner<'_> {
    /// State A Q^k |0⟩; reuses the cached state when k does not decrease.
    pub fn state_at(&mut self, k: u64) -> Result<&StateVector> {
        if k < self.power {
            self.current = self.base.clone();
            self.power = 0;
        }
        while self.power < k {
            self.problem.grover_step(&mut self.current)?;
            self.power += 1;
        }
        Ok(&self.current)
    }

    pub fn good_probability_at(&mut self, k: u64) -> Result<f64> {
        let problem = self.problem;
        let s = self.state_at(k)?;
        Ok(problem.good_probability(s))
    }
}

/// Stopping rule for amplitude estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Precision {
    /// Stop once the confidence interval has half-width ≤ ε.
    Additive(f64),
    /// Stop once half-width ≤ ρ · (lower end of the interval).
    Relative(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOutcome {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// Applications of A or A†.
    pub prep_calls: u64,
    pub rounds: u32,
}

const MAX_IAE_ROUNDS: u32 = 100_000;

/// Iterative amplitude estimation: no phase-estimation register, Grover powers
/// chosen so the scaled angle interval stays inside one half circle, and
/// Hoeffding intervals on the accumulated shots at each power. Check `i`
/// (1-based) runs at risk δ·2^{-i}, so the overall failure probability is at
/// most δ however many checks are made.
pub fn iterative_amplitude_estimation<R: Rng + ?Sized>(
    problem: &GroverProblem,
    precision: Precision,
    delta: f64,
    shots_per_round: u64,
    rng: &mut R,
) -> Result<EstimateOutcome> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0,1)")));
    }
    let tol = match precision {
        Precision::Additive(e) | Precision::Relative(e) => e,
    };
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParameter(format!("precision {tol} outside (0,1)")));
    }
    let shots = shots_per_round.max(1);
    let mut runner = problem.runner()?;

    // Angles in turns: a = sin²(2π θ), θ ∈ [0, 1/4].
    let (mut theta_l, mut theta_u) = (0.0_f64, 0.25_f64);
    let (mut a_l, mut a_u) = (0.0_f64, 1.0_f64);
    let mut k: u64 = 0;
    let mut upper_half = true;
    let mut round_shots: u64 = 0;
    let mut round_ones: u64 = 0;
    let mut prep_calls: u64 = 0;
    let mut rounds: u32 = 0;

    let done = |a_l: f64, a_u: f64| match precision {
        Precision::Additive(eps) => a_u - a_l <= 2.0 * eps,
        Precision::Relative(rho) => a_l > 0.0 && (a_u - a_l) / 2.0 <= rho * a_l,
    };

    while !done(a_l, a_u) {
        rounds += 1;
        if rounds > MAX_IAE_ROUNDS {
            return Err(Error::Internal("amplitude estimation did not converge".into()));
        }
        let (next_k, half) = find_next_k(k, upper_half, theta_l, theta_u);
        if next_k != k {
            round_shots = 0;
            round_ones = 0;
        }
        k = next_k;
        upper_half = half;

        let p = runner.good_probability_at(k)?.clamp(0.0, 1.0);
        let ones = Binomial::new(shots, p).expect("p in [0,1]").sample(rng);
        prep_calls += shots * (2 * k + 1);
        round_shots += shots;
        round_ones += ones;

        let risk = delta * 0.5_f64.powi(rounds.min(1000) as i32);
        let freq = round_ones as f64 / round_shots as f64;
        let half_width = ((2.0 / risk).ln() / (2.0 * round_shots as f64)).sqrt();
        let (p_min, p_max) = ((freq - half_width).max(0.0), (freq + half_width).min(1.0));

        let (t_min, t_max) = if upper_half {
            ((1.0 - 2.0 * p_min).acos() / (2.0 * PI), (1.0 - 2.0 * p_max).acos() / (2.0 * PI))
        } else {
            (1.0 - (1.0 - 2.0 * p_max).acos() / (2.0 * PI), 1.0 - (1.0 - 2.0 * p_min).acos() / (2.0 * PI))
        };
        let scaling = (4 * k + 2) as f64;
        let new_l = ((scaling * theta_l).floor() + t_min) / scaling;
        let new_u = ((scaling * theta_u).floor() + t_max) / scaling;
        let (l, u) = (new_l.max(theta_l), new_u.min(theta_u));
        if l <= u {
            theta_l = l;
            theta_u = u;
        } else {
            theta_l = new_l.min(new_u);
            theta_u = new_l.max(new_u);
        }
        a_l = (2.0 * PI * theta_l).sin().powi(2);
        a_u = (2.0 * PI * theta_u).sin().powi(2);
        if a_l > a_u {
            std::mem::swap(&mut a_l, &mut a_u);
        }
    }
    Ok(EstimateOutcome { estimate: 0.5 * (a_l + a_u), lower: a_l, upper: a_u, prep_calls, rounds })
}

/// Largest admissible power 4k+2 at least twice the current one for which the
/// scaled interval sits in a single half circle; otherwise keep k.
fn find_next_k(k: u64, upper_half: bool, theta_l: f64, theta_u: f64) -> (u64, bool) {
    let old_scaling = 4 * k + 2;
    let width = theta_u - theta_l;
    if width <= 0.0 {
        return (k, upper_half);
    }
    let max_scaling = (1.0 / (2.0 * width)).floor().min(1e12) as u64;
    if max_scaling < 2 {
        return (k, upper_half);
    }
    let mut scaling = max_scaling - (max_scaling - 2) % 4;
    while scaling >= 2 * old_scaling {
        let s = scaling as f64;
        let lo = s * theta_l - (s * theta_l).floor();
        let hi = s * theta_u - (s * theta_u).floor();
        if lo <= hi && hi <= 0.5 {
            return ((scaling - 2) / 4, true);
        }
        if lo >= 0.5 && hi >= lo {
            return ((scaling - 2) / 4, false);
        }
        scaling -= 4;
    }
    (k, upper_half)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmplifyOutcome {
    /// Basis index of the final measurement.
    pub index: usize,
    pub good: bool,
    pub prep_calls: u64,
    pub attempts: u32,
}

/// Amplitude amplification without knowing the good probability: the Grover
/// power is drawn uniformly below a cap that grows by 6/5 after every miss
/// (saturating at √(dim)). After the cap saturates, each attempt succeeds with
/// probability at least 1/4, which fixes the attempt budget for risk δ.
pub fn amplify_unknown<R: Rng + ?Sized>(
    problem: &GroverProblem,
    delta: f64,
    rng: &mut R,
) -> Result<AmplifyOutcome> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0,1)")));
    }
    const GROWTH: f64 = 6.0 / 5.0;
    let cap_max = (problem.layout.dim() as f64).sqrt().max(1.0);
    let ramp = (cap_max.ln() / GROWTH.ln()).ceil() as u32 + 1;
    let tail = ((1.0 / delta).ln() / (4.0_f64 / 3.0).ln()).ceil() as u32;
    let max_attempts = ramp + tail;

    let mut runner = problem.runner()?;
    let mut cap = 1.0_f64;
    let mut prep_calls = 0;
    let mut last = 0;
    for attempt in 1..=max_attempts {
        let j = rng.gen_range(0..cap.ceil().max(1.0) as u64);
        let state = runner.state_at(j)?;
        let index = state.sample_index(rng);
        prep_calls += 2 * j + 1;
        if (problem.good)(index) {
            return Ok(AmplifyOutcome { index, good: true, prep_calls, attempts: attempt });
        }
        last = index;
        cap = (cap * GROWTH).min(cap_max);
    }
    Ok(AmplifyOutcome { index: last, good: false, prep_calls, attempts: max_attempts })
}
