//! Bounded performance models on [0,1], their discretization onto 2^k cell
//! midpoints, classical sampling from the discrete table and the
//! amplitude-loading oracle of a single solution.
//!
//! The classical sampler and the quantum oracle read the same table, so both
//! estimators target the same `exact_mean`.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::qcore::{amplitude_loading, value_controls, Circuit, Gate, QubitLayout, RegisterName, StateVector};

/// Noise qubits used for continuous families unless configured otherwise.
pub const DEFAULT_NOISE_QUBITS: usize = 3;
pub const MAX_NOISE_QUBITS: usize = 6;

const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerformanceDistribution {
    Bernoulli { p: f64 },
    /// Normal law restricted to [0,1] and renormalized.
    TruncatedGaussian { center: f64, sd: f64 },
    /// Uniform on [lo, hi] ∩ [0,1].
    Uniform { lo: f64, hi: f64 },
    /// Density proportional to exp(-rate·y) on [0,1]. Negative rates tilt the
    /// mass towards 1; zero is the uniform law.
    TruncatedExponential { rate: f64 },
}

impl PerformanceDistribution {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        match *self {
            Self::Bernoulli { p } if !(0.0..=1.0).contains(&p) => {
                bad(format!("Bernoulli p = {p} outside [0,1]"))
            }
            Self::TruncatedGaussian { center, sd } if !center.is_finite() || !(sd > 0.0) || !sd.is_finite() => {
                bad(format!("Gaussian center {center}, sd {sd}"))
            }
            Self::Uniform { lo, hi } if !(lo < hi) || !lo.is_finite() || !hi.is_finite() => {
                bad(format!("Uniform bounds [{lo}, {hi}]"))
            }
            Self::Uniform { lo, hi } if hi <= 0.0 || lo >= 1.0 => {
                bad(format!("Uniform [{lo}, {hi}] has no mass in [0,1]"))
            }
            Self::TruncatedExponential { rate } if !rate.is_finite() || rate.abs() > 500.0 => {
                bad(format!("exponential rate {rate}"))
            }
            _ => Ok(()),
        }
    }

    /// Unnormalized mass of the cell [lo, hi] ⊆ [0,1] (continuous families).
    fn cell_mass(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            Self::Bernoulli { .. } => unreachable!("Bernoulli is discretized directly"),
            Self::TruncatedGaussian { center, sd } => normal_mass((lo - center) / sd, (hi - center) / sd),
            Self::Uniform { lo: a, hi: b } => (hi.min(b) - lo.max(a)).max(0.0),
            Self::TruncatedExponential { rate } => {
                if rate == 0.0 {
                    hi - lo
                } else {
                    // e^{-r lo} (1 - e^{-r (hi - lo)}) / r, scaled by e^{r} when r < 0
                    // so that large negative rates stay finite.
                    let shift = if rate < 0.0 { rate } else { 0.0 };
                    (-rate * lo + shift).exp() * -(-rate * (hi - lo)).exp_m1() / rate
                }
            }
        }
    }

    /// Discretization onto 2^k cells of [0,1].
    pub fn discretize(&self, k: usize) -> Result<DiscretizedDistribution> {
        self.validate()?;
        if !(1..=MAX_NOISE_QUBITS).contains(&k) {
            return Err(Error::InvalidParameter(format!("k = {k} outside [1, {MAX_NOISE_QUBITS}]")));
        }
        let n = 1usize << k;
        let width = 1.0 / n as f64;
        let mut points: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * width).collect();
        let mut probs = vec![0.0; n];
        match *self {
            Self::Bernoulli { p } => {
                points[0] = 0.0;
                points[n - 1] = 1.0;
                probs[0] = 1.0 - p;
                probs[n - 1] = p;
            }
            _ => {
                for (j, prob) in probs.iter_mut().enumerate() {
                    *prob = self.cell_mass(j as f64 * width, (j + 1) as f64 * width);
                }
                let total: f64 = probs.iter().sum();
                if !(total > 1e-300) || !total.is_finite() {
                    return Err(Error::InvalidDistribution(format!(
                        "{self:?} puts no mass on [0,1]"
                    )));
                }
                probs.iter_mut().for_each(|p| *p /= total);
            }
        }
        DiscretizedDistribution::from_table(points, probs)
    }
}

/// Φ(b) − Φ(a) for standard normal arguments, accurate in both tails.
fn normal_mass(a: f64, b: f64) -> f64 {
    use std::f64::consts::SQRT_2;
    if a >= 0.0 {
        0.5 * (libm::erfc(a / SQRT_2) - libm::erfc(b / SQRT_2))
    } else if b <= 0.0 {
        0.5 * (libm::erfc(-b / SQRT_2) - libm::erfc(-a / SQRT_2))
    } else {
        1.0 - 0.5 * (libm::erfc(-a / SQRT_2) + libm::erfc(b / SQRT_2))
    }
}

/// Finite table of support points in [0,1] with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedDistribution {
    k: usize,
    points: Vec<f64>,
    probs: Vec<f64>,
    cdf: Vec<f64>,
    exact_mean: f64,
}

impl DiscretizedDistribution {
    pub fn from_table(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if n < 2 || !n.is_power_of_two() || probs.len() != n {
            return Err(Error::InvalidDistribution(format!(
                "table needs 2^k >= 2 matching entries (got {n} points, {} probs)",
                probs.len()
            )));
        }
        if points.iter().any(|y| !(0.0..=1.0).contains(y)) {
            return Err(Error::InvalidDistribution("support point outside [0,1]".into()));
        }
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidDistribution("negative or non-finite probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let exact_mean = points.iter().zip(&probs).map(|(y, p)| y * p).sum::<f64>().clamp(0.0, 1.0);
        Ok(Self { k: n.trailing_zeros() as usize, points, probs, cdf, exact_mean })
    }

    /// Point mass at 1, used for the auxiliary solution of the region search.
    pub fn point_mass_one() -> Self {
        PerformanceDistribution::Bernoulli { p: 1.0 }.discretize(1).expect("valid Bernoulli")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn exact_mean(&self) -> f64 {
        self.exact_mean
    }

    pub fn variance(&self) -> f64 {
        let mu = self.exact_mean;
        self.points.iter().zip(&self.probs).map(|(y, p)| p * (y - mu) * (y - mu)).sum()
    }

    /// One draw by inverse CDF over the table.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let j = self.cdf.partition_point(|&c| c <= u);
        if j < self.points.len() && self.probs[j] > 0.0 {
            return self.points[j];
        }
        // u landed past the last cumulative value through rounding.
        let last = self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        self.points[last]
    }

    /// Per-cell counts of `n` independent draws (one multinomial vector).
    pub fn sample_counts<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Vec<u64> {
        let mut counts = vec![0u64; self.probs.len()];
        let mut remaining = n;
        let mut mass_left = 1.0;
        for (j, &p) in self.probs.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            if p <= 0.0 {
                continue;
            }
            let q = (p / mass_left).min(1.0);
            let c = if q >= 1.0 || j + 1 == self.probs.len() {
                remaining
            } else {
                Binomial::new(remaining, q).expect("q in [0,1]").sample(rng)
            };
            counts[j] = c;
            remaining -= c;
            mass_left -= p;
        }
        if remaining > 0 {
            // Rounding left a sliver of mass unassigned; give it to the last live cell.
            let last = self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
            counts[last] += remaining;
        }
        counts
    }
}

/// Classical sampler shared with the classical benchmark.
pub fn sample_classical<R: Rng + ?Sized>(d: &DiscretizedDistribution, rng: &mut R) -> f64 {
    d.sample(rng)
}

/// Quantum simulation oracle for one solution: loads √p_j on the noise
/// register and rotates an objective qubit so that P(objective = 1 | j) = y_j.
#[derive(Debug, Clone)]
pub struct SolutionOracle {
    table: DiscretizedDistribution,
    layout: QubitLayout,
    prep: Circuit,
}

impl SolutionOracle {
    pub fn table(&self) -> &DiscretizedDistribution {
        &self.table
    }

    pub fn exact_mean(&self) -> f64 {
        self.table.exact_mean
    }

    /// Local layout: noise register `Xi` (k qubits) then objective `Y` (1 qubit).
    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn prep(&self) -> &Circuit {
        &self.prep
    }

    pub fn objective_qubit(&self) -> usize {
        self.table.k
    }

    /// The same preparation placed on arbitrary qubits of a larger layout.
    pub fn prep_on(&self, noise_qubits: &[usize], objective: usize) -> Result<Circuit> {
        prep_circuit(&self.table, noise_qubits, objective)
    }

    /// Prepared state on the local layout.
    pub fn prepared_state(&self) -> Result<StateVector> {
        let mut s = StateVector::zero(self.layout.clone());
        self.prep.apply(&mut s)?;
        Ok(s)
    }
}

fn prep_circuit(table: &DiscretizedDistribution, noise: &[usize], objective: usize) -> Result<Circuit> {
    let mut circuit = amplitude_loading(noise, &table.probs)?;
    for (j, (&y, &p)) in table.points.iter().zip(&table.probs).enumerate() {
        if p <= 0.0 || y <= 0.0 {
            continue;
        }
        let ry = Gate::Ry { target: objective, theta: 2.0 * y.sqrt().min(1.0).asin() };
        circuit.push(Gate::controlled(ry, value_controls(noise, j))?);
    }
    Ok(circuit)
}

pub fn build_oracle(d: &DiscretizedDistribution) -> Result<SolutionOracle> {
    let layout = QubitLayout::new(&[(RegisterName::Xi, d.k), (RegisterName::Y, 1)])?;
    let noise: Vec<usize> = (0..d.k).collect();
    let prep = prep_circuit(d, &noise, d.k)?;
    Ok(SolutionOracle { table: d.clone(), layout, prep })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_maps_to_end_cells() {
        let d = PerformanceDistribution::Bernoulli { p: 0.8 }.discretize(3).unwrap();
        assert_eq!(d.points()[0], 0.0);
        assert_eq!(d.points()[7], 1.0);
        assert!((d.probs()[0] - 0.2).abs() < 1e-15);
        assert!((d.probs()[7] - 0.8).abs() < 1e-15);
        assert!((d.exact_mean() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn uniform_unit_interval_is_flat() {
        let d = PerformanceDistribution::Uniform { lo: 0.0, hi: 1.0 }.discretize(3).unwrap();
        for (j, (&y, &p)) in d.points().iter().zip(d.probs()).enumerate() {
            assert!((p - 0.125).abs() < 1e-15);
            assert!((y - (2 * j + 1) as f64 / 16.0).abs() < 1e-15);
        }
        assert!((d.exact_mean() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        use PerformanceDistribution::*;
        for d in [
            Bernoulli { p: 1.2 },
            TruncatedGaussian { center: 0.5, sd: 0.0 },
            TruncatedGaussian { center: 80.0, sd: 0.1 },
            Uniform { lo: 1.5, hi: 2.0 },
            Uniform { lo: 0.4, hi: 0.4 },
            TruncatedExponential { rate: f64::NAN },
        ] {
            assert!(matches!(d.discretize(3), Err(Error::InvalidDistribution(_))), "{d:?}");
        }
        assert!(Bernoulli { p: 0.5 }.discretize(0).is_err());
        assert!(Bernoulli { p: 0.5 }.discretize(7).is_err());
    }

    #[test]
    fn steep_negative_exponential_stays_finite() {
        let d = PerformanceDistribution::TruncatedExponential { rate: -400.0 }.discretize(3).unwrap();
        assert!(d.probs()[7] > 0.999);
    }

    #[test]
    fn auxiliary_point_mass() {
        let d = DiscretizedDistribution::point_mass_one();
        assert_eq!(d.exact_mean(), 1.0);
        assert_eq!(d.variance(), 0.0);
    }
}
