use crate::error::{Error, Result};
use crate::numeric::ceil_log2_snap;

/// Where a true mean falls relative to the two flag thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionClass {
    /// y ≥ upper threshold: always flagged unless estimation fails.
    S1,
    /// y < lower threshold: never flagged unless estimation fails.
    S2,
    /// Buffer band between the thresholds: either label is acceptable.
    S3,
}

/// Parameters of one flag procedure: reference point ℓ, precision η, risk κ
/// over `n_solutions` candidates, and the derived grid 2^{-m}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlagParams {
    pub ell: f64,
    pub eta: f64,
    pub kappa: f64,
    pub n_solutions: usize,
    /// Δ = 2η.
    pub window: f64,
    /// m = ⌈log₂(1/Δ)⌉ + 2.
    pub m: i32,
    /// Per-solution estimation risk α = κ² / (4 n³).
    pub alpha: f64,
}

impl FlagParams {
    pub fn new(ell: f64, eta: f64, kappa: f64, n_solutions: usize) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter(format!("eta = {eta} outside (0,1]")));
        }
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::InvalidParameter(format!("kappa = {kappa} outside (0,1)")));
        }
        if !ell.is_finite() {
            return Err(Error::InvalidParameter(format!("ell = {ell}")));
        }
        if n_solutions == 0 {
            return Err(Error::InvalidParameter("flag procedure over zero solutions".into()));
        }
        let window = 2.0 * eta;
        let m = ceil_log2_snap(1.0 / window) + 2;
        let n = n_solutions as f64;
        let alpha = kappa * kappa / (4.0 * n * n * n);
        Ok(Self { ell, eta, kappa, n_solutions, window, m, alpha })
    }

    /// 2^{-m}; lies in [η/4, η/2].
    pub fn grid(&self) -> f64 {
        2f64.powi(-self.m)
    }

    /// ℓ + η − 2^{1−m}.
    pub fn lower_threshold(&self) -> f64 {
        self.ell + self.eta - 2.0 * self.grid()
    }

    /// ℓ + η − 2^{−m}.
    pub fn upper_threshold(&self) -> f64 {
        self.ell + self.eta - self.grid()
    }

    /// Comparison point ℓ + η − (3/2)·2^{−m}.
    pub fn midpoint(&self) -> f64 {
        self.ell + self.eta - 1.5 * self.grid()
    }

    /// Additive precision of each per-solution mean estimate, 2^{-m}/3.
    pub fn estimate_precision(&self) -> f64 {
        self.grid() / 3.0
    }

    pub fn classify(&self, mean: f64) -> RegionClass {
        if mean >= self.upper_threshold() {
            RegionClass::S1
        } else if mean < self.lower_threshold() {
            RegionClass::S2
        } else {
            RegionClass::S3
        }
    }
}
