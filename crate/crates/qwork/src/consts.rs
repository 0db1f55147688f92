//! Physical constants and numerical tolerances.

use crate::error::{QworkError, Result};

/// ħ in J·s (2019 SI exact value).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K (2019 SI exact value).
pub const KB_SI: f64 = 1.380_649e-23;

/// Bath parameters entering every free-energy expression: `F = U − kB·T·S`.
///
/// Two profiles are used throughout: the dimensionless test profile
/// `ħ = kB = T = 1`, and the SI profile with physical `ħ`, `kB` and a
/// caller-chosen temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (action units).
    pub hbar: f64,
    /// Boltzmann constant (energy per temperature).
    pub kb: f64,
    /// Bath temperature (temperature units).
    pub temperature: f64,
}

impl PhysicalConstants {
    /// Dimensionless profile `ħ = kB = T = 1`.
    pub fn dimensionless() -> Self {
        Self { hbar: 1.0, kb: 1.0, temperature: 1.0 }
    }

    /// SI profile at the given bath temperature in kelvin.
    pub fn si(temperature: f64) -> Self {
        Self { hbar: HBAR_SI, kb: KB_SI, temperature }
    }

    /// Custom profile; all three values must be strictly positive.
    pub fn new(hbar: f64, kb: f64, temperature: f64) -> Result<Self> {
        if !(hbar > 0.0 && kb > 0.0 && temperature > 0.0) {
            return Err(QworkError::InvalidArgument(format!(
                "hbar, kB and T must all be positive (got {hbar}, {kb}, {temperature})"
            )));
        }
        Ok(Self { hbar, kb, temperature })
    }

    /// `kB·T`, the energy scale of the bath.
    pub fn kbt(&self) -> f64 {
        self.kb * self.temperature
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::dimensionless()
    }
}

/// Validation tolerances.
///
/// Defaults sit a little above the double-precision eigendecomposition noise
/// floor; every check that uses them is scale-aware where the quantity checked
/// is not already O(1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity / symmetry deviation, `‖A − A†‖_max`.
    pub herm: f64,
    /// Trace deviation of density matrices, `|tr ρ − 1|`.
    pub trace: f64,
    /// Trace preservation of channels, `‖Σ K†K − I‖_max`.
    pub tp: f64,
    /// Eigenvalue floor for positive semidefiniteness checks.
    pub psd: f64,
    /// Commutator norm for energy conservation of dilations.
    pub comm: f64,
    /// Slack on distillable-work nonnegativity and zero-work assertions.
    pub work: f64,
    /// Relative slack on the symplectic-eigenvalue bound `ν ≥ ħ(1 − rel)`.
    pub rel: f64,
    /// Relative width of the marginal band in the boundedness classifier,
    /// scaled by the spectral norm of `G`.
    pub class_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-8,
            trace: 1e-8,
            tp: 1e-8,
            psd: 1e-8,
            comm: 1e-8,
            work: 1e-6,
            rel: 1e-6,
            class_rel: 1e-10,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        let d = PhysicalConstants::dimensionless();
        assert_eq!(d.kbt(), 1.0);
        let si = PhysicalConstants::si(300.0);
        assert!(si.hbar < 1e-33 && si.kb < 1e-22);
        assert!(PhysicalConstants::new(1.0, 1.0, -1.0).is_err());
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0).is_err());
    }
}
