//! Dense statevector kernel: register layouts, gates, measurement and the
//! Grover reflections needed by the search drivers.

mod circuit;
mod gate;
mod layout;
mod state;

pub use circuit::{amplitude_loading, value_controls, Circuit};
pub use gate::{unitarity_defect, BasisPredicate, Control, Gate, Matrix2, C64};
pub use layout::{QubitLayout, Register, RegisterName, MAX_QUBITS};
pub use state::{uniform_superposition, StateVector};
