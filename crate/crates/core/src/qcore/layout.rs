use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Hard cap on the number of qubits a dense statevector may span
/// (2^26 complex doubles is 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Named registers of the search circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegisterName {
    /// Solution index.
    X,
    /// Simulation noise.
    Xi,
    /// Performance output (a single objective qubit here).
    Y,
    /// Comparison label.
    A,
    /// Mean-estimate register.
    P,
    /// Final flag.
    F,
    /// Scratch.
    Anc,
}

impl fmt::Display for RegisterName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegisterName::X => "X",
            RegisterName::Xi => "XI",
            RegisterName::Y => "Y",
            RegisterName::A => "A",
            RegisterName::P => "P",
            RegisterName::F => "F",
            RegisterName::Anc => "ANC",
        };
        f.write_str(s)
    }
}

/// A contiguous block of qubits. Qubit `offset` holds the least significant
/// bit of the register value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Register {
    pub name: RegisterName,
    pub offset: usize,
    pub width: usize,
}

impl Register {
    pub fn qubits(&self) -> Range<usize> {
        self.offset..self.offset + self.width
    }

    pub fn qubit(&self, bit: usize) -> usize {
        debug_assert!(bit < self.width);
        self.offset + bit
    }

    /// Basis-index mask covering this register.
    pub fn mask(&self) -> usize {
        ((1usize << self.width) - 1) << self.offset
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    /// Register value encoded in a full basis index.
    #[inline]
    pub fn value_of(&self, index: usize) -> usize {
        (index >> self.offset) & ((1 << self.width) - 1)
    }

    /// Basis index with this register overwritten by `value`.
    #[inline]
    pub fn with_value(&self, index: usize, value: usize) -> usize {
        (index & !self.mask()) | (value << self.offset)
    }
}

/// Ordered register layout; registers are packed from qubit 0 upward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitLayout {
    registers: Vec<Register>,
    total_qubits: usize,
}

impl QubitLayout {
    pub fn new(spec: &[(RegisterName, usize)]) -> Result<Self> {
        if spec.is_empty() {
            return Err(Error::Layout("layout needs at least one register".into()));
        }
        let mut registers = Vec::with_capacity(spec.len());
        let mut offset = 0;
        for &(name, width) in spec {
            if width == 0 {
                return Err(Error::Layout(format!("register {name} has zero width")));
            }
            if registers.iter().any(|r: &Register| r.name == name) {
                return Err(Error::Layout(format!("register {name} declared twice")));
            }
            registers.push(Register { name, offset, width });
            offset += width;
        }
        if offset > MAX_QUBITS {
            return Err(Error::Layout(format!(
                "{offset} qubits exceeds the statevector cap of {MAX_QUBITS}"
            )));
        }
        Ok(Self { registers, total_qubits: offset })
    }

    /// Single register spanning `width` qubits.
    pub fn single(name: RegisterName, width: usize) -> Result<Self> {
        Self::new(&[(name, width)])
    }

    pub fn register(&self, name: RegisterName) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::Layout(format!("unknown register {name}")))
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.total_qubits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registers_are_contiguous_and_cover_all_qubits() {
        let layout = QubitLayout::new(&[
            (RegisterName::X, 2),
            (RegisterName::Xi, 3),
            (RegisterName::Y, 1),
        ])
        .unwrap();
        assert_eq!(layout.total_qubits(), 6);
        let mut covered = vec![false; 6];
        for r in layout.registers() {
            for q in r.qubits() {
                assert!(!covered[q]);
                covered[q] = true;
            }
        }
        assert!(covered.iter().all(|&c| c));
        let xi = layout.register(RegisterName::Xi).unwrap();
        assert_eq!(xi.offset, 2);
        assert_eq!(xi.value_of(0b101_100), 0b011);
        assert_eq!(xi.with_value(0, 0b111), 0b011_100);
    }

    #[test]
    fn rejects_oversized_and_malformed_layouts() {
        assert!(QubitLayout::new(&[(RegisterName::X, 20), (RegisterName::P, 7)]).is_err());
        assert!(QubitLayout::new(&[(RegisterName::X, 26)]).is_ok());
        assert!(QubitLayout::new(&[(RegisterName::X, 0)]).is_err());
        assert!(QubitLayout::new(&[(RegisterName::X, 1), (RegisterName::X, 1)]).is_err());
        let layout = QubitLayout::single(RegisterName::X, 2).unwrap();
        assert!(matches!(layout.register(RegisterName::F), Err(Error::Layout(_))));
    }
}
