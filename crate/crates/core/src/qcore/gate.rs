use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// 2x2 complex matrix, row major.
pub type Matrix2 = [[C64; 2]; 2];

const UNITARY_TOL: f64 = 1e-12;

/// Predicate over full basis indices.
#[derive(Clone)]
pub struct BasisPredicate(Arc<dyn Fn(usize) -> bool + Send + Sync>);

impl BasisPredicate {
    pub fn new(f: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    #[inline]
    pub fn test(&self, index: usize) -> bool {
        (self.0)(index)
    }
}

impl fmt::Debug for BasisPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BasisPredicate(..)")
    }
}

/// A control qubit and the value it must hold for the gate to fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub on: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, on: true }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, on: false }
    }
}

#[derive(Debug, Clone)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Ry { target: usize, theta: f64 },
    Phase { target: usize, theta: f64 },
    /// Arbitrary single-qubit unitary; build with [`Gate::unitary`].
    Unitary { target: usize, matrix: Matrix2 },
    /// Single-qubit gate conditioned on every control matching.
    Controlled { gate: Box<Gate>, controls: Vec<Control> },
    /// Multiplies the amplitude of every basis state satisfying the predicate by -1.
    OraclePhaseFlip { predicate: BasisPredicate },
    /// Flips `target` on every basis state whose index (with the target bit
    /// cleared) satisfies the predicate.
    OracleBitFlip { predicate: BasisPredicate, target: usize },
}

impl Gate {
    /// Validated custom single-qubit gate.
    pub fn unitary(target: usize, matrix: Matrix2) -> Result<Self> {
        let dev = unitarity_defect(&matrix);
        if dev > UNITARY_TOL {
            return Err(Error::GateConstruction(format!(
                "matrix is not unitary (max |UU^dagger - I| = {dev:e})"
            )));
        }
        Ok(Gate::Unitary { target, matrix })
    }

    /// Wraps a gate in extra controls. Nested controls are flattened.
    pub fn controlled(gate: Gate, controls: Vec<Control>) -> Result<Self> {
        match gate {
            Gate::Controlled { gate, controls: inner } => {
                let mut all = inner;
                all.extend(controls);
                Gate::controlled(*gate, all)
            }
            Gate::OraclePhaseFlip { .. } | Gate::OracleBitFlip { .. } => Err(
                Error::GateConstruction("oracle gates cannot be wrapped in controls".into()),
            ),
            g => {
                let target = g.target().expect("single-qubit gate");
                let mut seen = vec![target];
                for c in &controls {
                    if seen.contains(&c.qubit) {
                        return Err(Error::GateConstruction(format!(
                            "qubit {} used twice in controlled gate",
                            c.qubit
                        )));
                    }
                    seen.push(c.qubit);
                }
                Ok(Gate::Controlled { gate: Box::new(g), controls })
            }
        }
    }

    pub fn phase_flip(predicate: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        Gate::OraclePhaseFlip { predicate: BasisPredicate::new(predicate) }
    }

    pub fn bit_flip(target: usize, predicate: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        Gate::OracleBitFlip { predicate: BasisPredicate::new(predicate), target }
    }

    /// Target qubit for single-qubit and controlled kinds.
    pub fn target(&self) -> Option<usize> {
        match self {
            Gate::H(t) | Gate::X(t) | Gate::Z(t) => Some(*t),
            Gate::Ry { target, .. } | Gate::Phase { target, .. } | Gate::Unitary { target, .. } => {
                Some(*target)
            }
            Gate::Controlled { gate, .. } => gate.target(),
            Gate::OracleBitFlip { target, .. } => Some(*target),
            Gate::OraclePhaseFlip { .. } => None,
        }
    }

    /// 2x2 matrix of a single-qubit kind.
    pub fn matrix2(&self) -> Option<Matrix2> {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let m = match self {
            Gate::H(_) => {
                let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[s, s], [s, -s]]
            }
            Gate::X(_) => [[z, one], [one, z]],
            Gate::Z(_) => [[one, z], [z, -one]],
            Gate::Ry { theta, .. } => {
                let (s, c) = (theta / 2.0).sin_cos();
                [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
            }
            Gate::Phase { theta, .. } => [[one, z], [z, C64::from_polar(1.0, *theta)]],
            Gate::Unitary { matrix, .. } => *matrix,
            _ => return None,
        };
        Some(m)
    }

    /// Inverse gate.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::H(_) | Gate::X(_) | Gate::Z(_) => self.clone(),
            Gate::Ry { target, theta } => Gate::Ry { target: *target, theta: -theta },
            Gate::Phase { target, theta } => Gate::Phase { target: *target, theta: -theta },
            Gate::Unitary { target, matrix } => {
                let m = matrix;
                Gate::Unitary {
                    target: *target,
                    matrix: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
                }
            }
            Gate::Controlled { gate, controls } => {
                Gate::Controlled { gate: Box::new(gate.inverse()), controls: controls.clone() }
            }
            Gate::OraclePhaseFlip { .. } | Gate::OracleBitFlip { .. } => self.clone(),
        }
    }

    /// Checks every qubit index against `num_qubits` and control/target disjointness.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q >= num_qubits {
                Err(Error::Layout(format!("qubit {q} out of range for {num_qubits} qubits")))
            } else {
                Ok(())
            }
        };
        match self {
            Gate::Controlled { gate, controls } => {
                gate.validate(num_qubits)?;
                let t = gate.target().expect("controlled gate has a target");
                for c in controls {
                    check(c.qubit)?;
                    if c.qubit == t {
                        return Err(Error::Layout(format!("control qubit {t} is also the target")));
                    }
                }
                Ok(())
            }
            Gate::OraclePhaseFlip { .. } => Ok(()),
            g => check(g.target().expect("targeted gate")),
        }
    }
}

/// Max-norm distance of U·U† from the identity.
pub fn unitarity_defect(m: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..2 {
                acc += m[i][k] * m[j][k].conj();
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - C64::new(expect, 0.0)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn custom_matrix_must_be_unitary() {
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        assert!(Gate::unitary(0, [[one, z], [z, one]]).is_ok());
        let err = Gate::unitary(0, [[one, one], [z, one]]).unwrap_err();
        assert!(matches!(err, Error::GateConstruction(_)));
    }

    #[test]
    fn controlled_rejects_overlap_and_flattens() {
        assert!(Gate::controlled(Gate::X(1), vec![Control::on(1)]).is_err());
        let g = Gate::controlled(Gate::controlled(Gate::X(0), vec![Control::on(1)]).unwrap(), vec![
            Control::off(2),
        ])
        .unwrap();
        match g {
            Gate::Controlled { controls, gate } => {
                assert_eq!(controls.len(), 2);
                assert!(matches!(*gate, Gate::X(0)));
            }
            _ => panic!("expected controlled gate"),
        }
    }

    #[test]
    fn validate_catches_out_of_range() {
        assert!(Gate::H(3).validate(3).is_err());
        assert!(Gate::H(2).validate(3).is_ok());
        let g = Gate::controlled(Gate::X(0), vec![Control::on(5)]).unwrap();
        assert!(matches!(g.validate(3), Err(Error::Layout(_))));
    }
}
