use super::gate::{Control, Gate};
use super::state::StateVector;
use crate::error::{Error, Result};

/// Ordered gate list with an exact inverse.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: Circuit) {
        self.gates.extend(other.gates);
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        state.apply_all(&self.gates)
    }

    pub fn apply_inverse(&self, state: &mut StateVector) -> Result<()> {
        for g in self.gates.iter().rev() {
            state.apply(&g.inverse())?;
        }
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        Circuit { gates: self.gates.iter().rev().map(Gate::inverse).collect() }
    }

    /// Every gate conditioned on `controls` as well.
    pub fn controlled(&self, controls: &[Control]) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .map(|g| Gate::controlled(g.clone(), controls.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit { gates })
    }
}

/// Controls selecting the basis value `value` of the register on `qubits`
/// (least significant bit first).
pub fn value_controls(qubits: &[usize], value: usize) -> Vec<Control> {
    qubits
        .iter()
        .enumerate()
        .map(|(bit, &q)| Control { qubit: q, on: (value >> bit) & 1 == 1 })
        .collect()
}

/// Binary tree of (multi-)controlled RY rotations taking |0…0⟩ on `qubits`
/// (least significant bit first) to Σ_v √p_v |v⟩. `probs` is normalized
/// internally and must have length 2^qubits.len().
pub fn amplitude_loading(qubits: &[usize], probs: &[f64]) -> Result<Circuit> {
    let width = qubits.len();
    if probs.len() != 1 << width {
        return Err(Error::InvalidParameter(format!(
            "{} probabilities for a {width}-qubit register",
            probs.len()
        )));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidParameter("probabilities must be finite and non-negative".into()));
    }
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("probabilities sum to zero".into()));
    }

    let mut circuit = Circuit::new();
    // Most significant bit first; each level conditions on the bits above it.
    for level in (0..width).rev() {
        let block = 1usize << (level + 1);
        for prefix in 0..(1usize << (width - level - 1)) {
            let start = prefix * block;
            let half = block / 2;
            let mass0: f64 = probs[start..start + half].iter().sum();
            let mass1: f64 = probs[start + half..start + block].iter().sum();
            if mass1 <= 0.0 || mass0 + mass1 <= 0.0 {
                continue;
            }
            let theta = 2.0 * mass1.sqrt().atan2(mass0.sqrt());
            let controls = value_controls(&qubits[level + 1..], prefix);
            let ry = Gate::Ry { target: qubits[level], theta };
            circuit.push(if controls.is_empty() { ry } else { Gate::controlled(ry, controls)? });
        }
    }
    Ok(circuit)
}
