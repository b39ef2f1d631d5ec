//! T1/T2 noise model and its Lindblad collapse operators.

use crate::error::{Error, Result};
use crate::hamiltonian::{embed_single, pauli_string, Pauli};
use crate::linalg::ComplexMatrix;

/// Median T1 of recent transmon devices, µs.
pub const REFERENCE_T1_US: f64 = 262.69;
/// Median T2 of recent transmon devices, µs.
pub const REFERENCE_T2_US: f64 = 176.67;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub t1: f64,
    pub t2: f64,
    /// µs per simulation time unit.
    pub kappa: f64,
    pub enable_relaxation: bool,
    pub enable_dephasing: bool,
}

/// Lindblad rates per simulation time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRates {
    /// γ₁
    pub relaxation: f64,
    /// γ_φ
    pub dephasing: f64,
}

impl NoiseModel {
    pub fn new(t1: f64, t2: f64, kappa: f64, enable_relaxation: bool, enable_dephasing: bool) -> Result<Self> {
        if !(t1 > 0.0) || !(t2 > 0.0) {
            return Err(Error::InvalidParameter(format!("coherence times must be positive (T1 = {t1}, T2 = {t2})")));
        }
        if !(kappa > 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
        }
        Ok(Self { t1, t2, kappa, enable_relaxation, enable_dephasing })
    }

    pub fn noiseless() -> Self {
        Self {
            t1: REFERENCE_T1_US,
            t2: REFERENCE_T2_US,
            kappa: 1.0,
            enable_relaxation: false,
            enable_dephasing: false,
        }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    /// γ₁ = κ/T1; γ_φ = κ(1/T2 − 1/(2T1)) with relaxation on, κ/T2 without.
    /// Disabled channels report zero.
    pub fn rates(&self) -> Result<DecayRates> {
        let relaxation = if self.enable_relaxation { self.kappa / self.t1 } else { 0.0 };
        let dephasing = match (self.enable_relaxation, self.enable_dephasing) {
            (_, false) => 0.0,
            (true, true) => self.kappa * (1.0 / self.t2 - 1.0 / (2.0 * self.t1)),
            (false, true) => self.kappa / self.t2,
        };
        if dephasing < 0.0 {
            return Err(Error::UnphysicalRates(dephasing));
        }
        Ok(DecayRates { relaxation, dephasing })
    }
}

/// σ⁻ = |0⟩⟨1|
pub fn lowering() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
}

/// Per qubit: √γ₁·σ⁻ (relaxation), then √(γ_φ/2)·σᶻ (dephasing).
pub fn collapse_operators(noise: &NoiseModel, n: usize) -> Result<Vec<ComplexMatrix>> {
    let rates = noise.rates()?;
    let mut ops = Vec::new();
    for site in 0..n {
        if noise.enable_relaxation {
            ops.push(embed_single(&lowering(), site, n)?.scale_real(rates.relaxation.sqrt()));
        }
        if noise.enable_dephasing {
            ops.push(pauli_string(n, &[(site, Pauli::Z)])?.scale_real((rates.dephasing / 2.0).sqrt()));
        }
    }
    Ok(ops)
}
