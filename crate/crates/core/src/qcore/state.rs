use std::fmt::Write as _;

use rand::Rng;

use super::gate::{Gate, Matrix2, C64};
use super::layout::{QubitLayout, Register, RegisterName};
use crate::error::{Error, Result};
use crate::par;

/// Dense statevector over a register layout. Basis index bit `q` is qubit `q`
/// (qubit 0 is the least significant bit).
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Vec<C64>,
    layout: QubitLayout,
}

impl StateVector {
    /// All qubits in |0⟩.
    pub fn zero(layout: QubitLayout) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); layout.dim()];
        amps[0] = C64::new(1.0, 0.0);
        Self { amps, layout }
    }

    /// Computational basis state `index`.
    pub fn basis(layout: QubitLayout, index: usize) -> Result<Self> {
        if index >= layout.dim() {
            return Err(Error::Layout(format!("basis index {index} out of range")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); layout.dim()];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps, layout })
    }

    /// Wraps raw amplitudes; the vector must be normalized.
    pub fn from_amplitudes(layout: QubitLayout, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::Layout(format!(
                "{} amplitudes for a {}-qubit layout",
                amps.len(),
                layout.total_qubits()
            )));
        }
        let s = Self { amps, layout };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("state has squared norm {n}")));
        }
        Ok(s)
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn norm_sqr(&self) -> f64 {
        par::sum_indexed(&self.amps, |_, a| a.norm_sqr())
    }

    pub fn register(&self, name: RegisterName) -> Result<Register> {
        self.layout.register(name).copied()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits())?;
        match gate {
            Gate::OraclePhaseFlip { predicate } => {
                par::for_each_indexed(&mut self.amps, |i, a| {
                    if predicate.test(i) {
                        *a = -*a;
                    }
                });
            }
            Gate::OracleBitFlip { predicate, target } => {
                let stride = 1usize << target;
                par::for_each_chunk(&mut self.amps, 2 * stride, |c, chunk| {
                    let base = c * 2 * stride;
                    let (lo, hi) = chunk.split_at_mut(stride);
                    for k in 0..stride {
                        if predicate.test(base + k) {
                            std::mem::swap(&mut lo[k], &mut hi[k]);
                        }
                    }
                });
            }
            Gate::Controlled { gate, controls } => {
                let m = gate.matrix2().expect("controlled payload is single-qubit");
                let t = gate.target().expect("single-qubit target");
                let (mut mask, mut val) = (0usize, 0usize);
                for c in controls {
                    mask |= 1 << c.qubit;
                    if c.on {
                        val |= 1 << c.qubit;
                    }
                }
                apply_single(&mut self.amps, t, &m, mask, val);
            }
            g => {
                let m = g.matrix2().expect("single-qubit gate");
                apply_single(&mut self.amps, g.target().expect("target"), &m, 0, 0);
            }
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Inversion about the mean of the amplitudes inside `register`, done
    /// independently for every configuration of the other qubits. Equals
    /// H^{⊗n}(2|0⟩⟨0| − I)H^{⊗n} on the register.
    pub fn grover_diffusion(&mut self, register: RegisterName) -> Result<()> {
        let reg = self.register(register)?;
        let mask = reg.mask();
        let dim = reg.dim();
        let mut scratch = vec![C64::new(0.0, 0.0); dim];
        for rest in 0..self.amps.len() {
            if rest & mask != 0 {
                continue;
            }
            let mut mean = C64::new(0.0, 0.0);
            for (v, s) in scratch.iter_mut().enumerate() {
                *s = self.amps[reg.with_value(rest, v)];
                mean += *s;
            }
            mean /= dim as f64;
            for (v, s) in scratch.iter().enumerate() {
                self.amps[reg.with_value(rest, v)] = mean * 2.0 - *s;
            }
        }
        Ok(())
    }

    /// 2|0⟩⟨0| − I on the qubits in `mask` (identity elsewhere).
    pub fn reflect_zero(&mut self, mask: usize) {
        par::for_each_indexed(&mut self.amps, |i, a| {
            if i & mask != 0 {
                *a = -*a;
            }
        });
    }

    /// Exact probability that `register` holds a value satisfying `predicate`.
    pub fn subspace_probability(
        &self,
        register: RegisterName,
        predicate: impl Fn(usize) -> bool + Sync + Send,
    ) -> Result<f64> {
        let reg = self.register(register)?;
        let p = par::sum_indexed(&self.amps, |i, a| {
            if predicate(reg.value_of(i)) {
                a.norm_sqr()
            } else {
                0.0
            }
        });
        Ok(p.clamp(0.0, 1.0))
    }

    /// Probability of a predicate over full basis indices.
    pub fn probability_where(&self, predicate: impl Fn(usize) -> bool + Sync + Send) -> f64 {
        par::sum_indexed(&self.amps, |i, a| if predicate(i) { a.norm_sqr() } else { 0.0 })
            .clamp(0.0, 1.0)
    }

    /// Marginal distribution of one register.
    pub fn register_distribution(&self, register: RegisterName) -> Result<Vec<f64>> {
        let reg = self.register(register)?;
        let mut probs = vec![0.0; reg.dim()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[reg.value_of(i)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Draws a full basis index without collapsing.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen::<f64>() * self.norm_sqr();
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
                acc += p;
                if u < acc {
                    return i;
                }
            }
        }
        last_nonzero
    }

    /// Projective measurement of one register. Returns the outcome and leaves
    /// the state in the renormalized post-measurement state.
    pub fn measure_register<R: Rng + ?Sized>(
        &mut self,
        register: RegisterName,
        rng: &mut R,
    ) -> Result<usize> {
        let reg = self.register(register)?;
        let probs = self.register_distribution(register)?;
        let total: f64 = probs.iter().sum();
        let u = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut outcome = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        for (v, &p) in probs.iter().enumerate() {
            acc += p;
            if p > 0.0 && u < acc {
                outcome = v;
                break;
            }
        }
        let scale = 1.0 / probs[outcome].sqrt();
        par::for_each_indexed(&mut self.amps, |i, a| {
            if reg.value_of(i) == outcome {
                *a *= scale;
            } else {
                *a = C64::new(0.0, 0.0);
            }
        });
        Ok(outcome)
    }

    /// Text dump, one `index<TAB>re<TAB>im` line per basis state.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.amps.len() * 24);
        for (i, a) in self.amps.iter().enumerate() {
            let _ = writeln!(out, "{i}\t{}\t{}", a.re, a.im);
        }
        out
    }
}

/// Applies a 2x2 matrix to qubit `target` on every basis pair whose index
/// matches `cval` on the bits of `cmask`.
fn apply_single(amps: &mut [C64], target: usize, m: &Matrix2, cmask: usize, cval: usize) {
    let stride = 1usize << target;
    let m = *m;
    par::for_each_chunk(amps, 2 * stride, move |c, chunk| {
        let base = c * 2 * stride;
        let (lo, hi) = chunk.split_at_mut(stride);
        for k in 0..stride {
            if (base + k) & cmask != cval {
                continue;
            }
            let (a0, a1) = (lo[k], hi[k]);
            lo[k] = m[0][0] * a0 + m[0][1] * a1;
            hi[k] = m[1][0] * a0 + m[1][1] * a1;
        }
    });
}

/// Uniform superposition on `register`, every other qubit left in |0⟩.
pub fn uniform_superposition(layout: QubitLayout, register: RegisterName) -> Result<StateVector> {
    let reg = *layout.register(register)?;
    let mut state = StateVector::zero(layout);
    for q in reg.qubits() {
        state.apply(&Gate::H(q))?;
    }
    Ok(state)
}
