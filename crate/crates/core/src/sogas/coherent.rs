//! Fully coherent flag procedure on a small instance.
//!
//! Register P receives, for every solution x, the output law of a
//! median-of-R canonical amplitude estimation of y(x) with M = 2^w phase
//! points. The law is computed exactly and loaded with an X-controlled
//! amplitude-loading tree, then compared against the midpoint into A and
//! copied into F.

use std::f64::consts::PI;

use super::params::{FlagParams, RegionClass};
use crate::dists::SolutionOracle;
use crate::error::{Error, Result};
use crate::numeric::ceil_log2_snap;
use crate::qcore::{amplitude_loading, value_controls, Circuit, Control, Gate, QubitLayout, RegisterName, StateVector};
use crate::qsub::GroverProblem;

pub const MAX_DEMO_SOLUTIONS: usize = 4;
pub const MAX_DEMO_NOISE_QUBITS: usize = 2;

/// Lower bound on the single-run success probability of canonical
/// amplitude estimation.
const CANONICAL_SUCCESS: f64 = 8.0 / (PI * PI);

#[derive(Debug, Clone)]
pub struct CoherentFlagDemo {
    pub layout: QubitLayout,
    pub circuit: Circuit,
    pub state: StateVector,
    /// P(F = 1).
    pub p_label: f64,
    /// (|S1| + Σ_{x∈S3} P(F = 1, X = x)) / |X|.
    pub q_label: f64,
    /// 2κ / |X|.
    pub bound: f64,
    /// P(F = 1 | X = x).
    pub flag_probability: Vec<f64>,
    pub classes: Vec<RegionClass>,
    pub repetitions: u32,
    pub estimate_qubits: usize,
}

impl CoherentFlagDemo {
    pub fn within_bound(&self) -> bool {
        (self.p_label - self.q_label).abs() <= self.bound
    }

    /// Amplification problem whose good subspace is F = 1.
    pub fn grover_problem(&self) -> Result<GroverProblem> {
        let f = self.layout.register(RegisterName::F)?.offset;
        Ok(GroverProblem::new(self.layout.clone(), self.circuit.clone(), move |i| (i >> f) & 1 == 1))
    }
}

/// sin²(MπΔ) / (M² sin²(πΔ)), with value 1 at integer Δ.
fn fejer(m: f64, d: f64) -> f64 {
    let s = (PI * d).sin();
    if s.abs() < 1e-12 {
        return 1.0;
    }
    let num = (m * PI * d).sin();
    (num * num) / (m * m * s * s)
}

/// Law of one canonical estimate, folded onto v ∈ 0..=M/2 so that the
/// estimate sin²(πv/M) increases with v.
pub fn canonical_estimate_law(a: f64, width: usize) -> Vec<f64> {
    let m = (1usize << width) as f64;
    let omega = a.clamp(0.0, 1.0).sqrt().asin() / PI;
    let half = 1usize << (width - 1);
    let mut law = vec![0.0; half + 1];
    for y in 0..(1usize << width) {
        let p = 0.5 * (fejer(m, y as f64 / m - omega) + fejer(m, y as f64 / m + omega));
        let v = y.min((1usize << width) - y);
        law[v] += p;
    }
    let total: f64 = law.iter().sum();
    law.iter_mut().for_each(|p| *p /= total);
    law
}

/// Number of independent runs whose median fails with probability at most α.
pub fn median_repetitions(alpha: f64) -> u32 {
    let gap = CANONICAL_SUCCESS - 0.5;
    let r = ((1.0 / alpha).ln() / (2.0 * gap * gap)).ceil().max(1.0) as u32;
    if r % 2 == 0 {
        r + 1
    } else {
        r
    }
}

/// P(Binomial(r, g) ≥ need).
fn binomial_upper_tail(r: u32, g: f64, need: u32) -> f64 {
    if g <= 0.0 {
        return 0.0;
    }
    if g >= 1.0 {
        return 1.0;
    }
    let rf = r as f64;
    let lr = libm::lgamma(rf + 1.0);
    (need..=r)
        .map(|j| {
            let jf = j as f64;
            (lr - libm::lgamma(jf + 1.0) - libm::lgamma(rf - jf + 1.0) + jf * g.ln() + (rf - jf) * (1.0 - g).ln())
                .exp()
        })
        .sum::<f64>()
        .min(1.0)
}

/// Law of the median of `r` (odd) independent draws from `law`.
pub fn median_law(law: &[f64], r: u32) -> Vec<f64> {
    let need = r / 2 + 1;
    let mut cdf = 0.0;
    let mut prev = 0.0;
    law.iter()
        .map(|&p| {
            cdf = (cdf + p).min(1.0);
            let cur = binomial_upper_tail(r, cdf, need);
            let out = (cur - prev).max(0.0);
            prev = cur;
            out
        })
        .collect()
}

pub fn coherent_flag_demo(oracles: &[&SolutionOracle], params: &FlagParams) -> Result<CoherentFlagDemo> {
    let n = oracles.len();
    if n == 0 || n > MAX_DEMO_SOLUTIONS {
        return Err(Error::InvalidParameter(format!("coherent demo takes 1..={MAX_DEMO_SOLUTIONS} solutions, got {n}")));
    }
    if n != params.n_solutions {
        return Err(Error::InvalidParameter(format!("parameters sized for {} solutions, got {n}", params.n_solutions)));
    }
    let k = oracles.iter().map(|o| o.table().k()).max().unwrap_or(1);
    if k > MAX_DEMO_NOISE_QUBITS {
        return Err(Error::InvalidParameter(format!("coherent demo takes at most {MAX_DEMO_NOISE_QUBITS} noise qubits")));
    }
    let x_width = if n <= 1 { 1 } else { ceil_log2_snap(n as f64).max(1) as usize };
    let p_width = (ceil_log2_snap(3.0 / params.grid()) + 1).max(2) as usize;
    let layout = QubitLayout::new(&[
        (RegisterName::X, x_width),
        (RegisterName::Xi, k),
        (RegisterName::Y, 1),
        (RegisterName::P, p_width),
        (RegisterName::A, 1),
        (RegisterName::F, 1),
    ])?;
    let xr = *layout.register(RegisterName::X)?;
    let xq: Vec<usize> = xr.qubits().collect();
    let xi: Vec<usize> = layout.register(RegisterName::Xi)?.qubits().collect();
    let y = layout.register(RegisterName::Y)?.offset;
    let pr = *layout.register(RegisterName::P)?;
    let pq: Vec<usize> = pr.qubits().collect();
    let a_q = layout.register(RegisterName::A)?.offset;
    let f_q = layout.register(RegisterName::F)?.offset;

    let mut probs = vec![0.0; 1 << x_width];
    probs[..n].iter_mut().for_each(|p| *p = 1.0 / n as f64);
    let mut circuit = amplitude_loading(&xq, &probs)?;

    let r = median_repetitions(params.alpha);
    let m_points = 1usize << p_width;
    for (x, o) in oracles.iter().enumerate() {
        let ctrl = value_controls(&xq, x);
        let kx = o.table().k();
        circuit.extend(o.prep_on(&xi[..kx], y)?.controlled(&ctrl)?);
        let law = median_law(&canonical_estimate_law(o.exact_mean(), p_width), r);
        let mut full = vec![0.0; m_points];
        full[..law.len()].copy_from_slice(&law);
        circuit.extend(amplitude_loading(&pq, &full)?.controlled(&ctrl)?);
    }
    let midpoint = params.midpoint();
    circuit.push(Gate::bit_flip(a_q, move |i| {
        let v = pr.value_of(i) as f64;
        (PI * v / m_points as f64).sin().powi(2) >= midpoint
    }));
    circuit.push(Gate::controlled(Gate::X(f_q), vec![Control::on(a_q)])?);

    let mut state = StateVector::zero(layout.clone());
    circuit.apply(&mut state)?;

    let flag_probability: Vec<f64> = (0..n)
        .map(|x| {
            state.probability_where(|i| xr.value_of(i) == x && (i >> f_q) & 1 == 1) * n as f64
        })
        .collect();
    let classes: Vec<RegionClass> = oracles.iter().map(|o| params.classify(o.exact_mean())).collect();
    let p_label = state.probability_where(|i| (i >> f_q) & 1 == 1);
    let q_label = classes
        .iter()
        .zip(&flag_probability)
        .map(|(c, &f)| match c {
            RegionClass::S1 => 1.0,
            RegionClass::S2 => 0.0,
            RegionClass::S3 => f,
        })
        .sum::<f64>()
        / n as f64;
    Ok(CoherentFlagDemo {
        layout,
        circuit,
        state,
        p_label,
        q_label,
        bound: 2.0 * params.kappa / n as f64,
        flag_probability,
        classes,
        repetitions: r,
        estimate_qubits: p_width,
    })
}
