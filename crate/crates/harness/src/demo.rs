use sogas_core::qcore::{uniform_superposition, Gate, QubitLayout, RegisterName};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverDemo {
    pub items: usize,
    pub marked: usize,
    pub iterations: u64,
    pub success: f64,
    /// sin²((2k+1)·asin(1/√N)).
    pub closed_form: f64,
}

/// Single-marked search over `items` (a power of two ≥ 2) with
/// ⌊(π/4)√N⌋ iterations.
pub fn grover_demo(items: usize) -> Result<GroverDemo, HarnessError> {
    if items < 2 || !items.is_power_of_two() {
        return Err(HarnessError::Config(format!("grover demo needs a power of two ≥ 2, got {items}")));
    }
    let width = items.trailing_zeros() as usize;
    let layout = QubitLayout::single(RegisterName::X, width)?;
    let marked = items - 1;
    let mut state = uniform_superposition(layout, RegisterName::X)?;
    let iterations = (std::f64::consts::FRAC_PI_4 * (items as f64).sqrt()).floor() as u64;
    let oracle = Gate::phase_flip(move |i| i == marked);
    for _ in 0..iterations {
        state.apply(&oracle)?;
        state.grover_diffusion(RegisterName::X)?;
    }
    let success = state.probability_where(|i| i == marked);
    let theta = (1.0 / (items as f64).sqrt()).asin();
    let closed_form = ((2 * iterations + 1) as f64 * theta).sin().powi(2);
    Ok(GroverDemo { items, marked, iterations, success, closed_form })
}
