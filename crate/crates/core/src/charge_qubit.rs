//! Charge-qubit hardware layer.
//!
//! Units: ħ = 1, Φ₀ = 1, energies in units of a reference Josephson energy.
//! Fluxes are fractions of the flux quantum restricted to `[0, 0.5]`, where
//! the effective Josephson energy falls monotonically from `E_J` to zero and
//! the inductive coupling rises monotonically from zero.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots::bisect;

/// Relative agreement demanded between per-site and per-pair rates.
pub const TUNING_REL_TOL: f64 = 1e-9;
/// Offset charge tolerance for the degeneracy point.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    /// E_C
    pub charging_energy: f64,
    /// E_J, the flux-free Josephson energy.
    pub max_josephson: f64,
    /// C·V/e
    pub offset_charge: f64,
    /// Φ/Φ₀
    pub flux: f64,
}

impl QubitParams {
    pub fn new(charging_energy: f64, max_josephson: f64, offset_charge: f64, flux: f64) -> Result<Self> {
        if !(charging_energy > 0.0) || !(max_josephson > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "energies must be positive (E_C = {charging_energy}, E_J = {max_josephson})"
            )));
        }
        check_flux(flux)?;
        Ok(Self { charging_energy, max_josephson, offset_charge, flux })
    }

    /// E_C ≥ 10·E_J
    pub fn in_charging_regime(&self) -> bool {
        self.charging_energy >= 10.0 * self.max_josephson
    }

    pub fn at_degeneracy(&self) -> bool {
        (self.offset_charge - 1.0).abs() <= DEGENERACY_TOL
    }
}

fn check_flux(flux: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&flux) {
        return Err(Error::FluxOutOfRange(flux));
    }
    Ok(())
}

/// σᶻ coefficient ε = ½·E_C·(C·V/e − 1); vanishes at the degeneracy point.
pub fn epsilon(q: &QubitParams) -> f64 {
    0.5 * q.charging_energy * (q.offset_charge - 1.0)
}

/// Ē_J = E_J·cos(πΦ)
pub fn effective_josephson(q: &QubitParams) -> Result<f64> {
    check_flux(q.flux)?;
    Ok(q.max_josephson * (PI * q.flux).cos())
}

/// Λ = L_J·π²·E_Ji·E_Jj·sin(πΦ_i)·sin(πΦ_j)
pub fn coupling_strength(qi: &QubitParams, qj: &QubitParams, coupler_inductance: f64) -> Result<f64> {
    check_flux(qi.flux)?;
    check_flux(qj.flux)?;
    Ok(coupler_inductance
        * PI
        * PI
        * qi.max_josephson
        * qj.max_josephson
        * (PI * qi.flux).sin()
        * (PI * qj.flux).sin())
}

/// L_J = Φ₀ / (2π·I₀) with critical current I₀ = 2π·E_J0/Φ₀.
pub fn coupler_inductance_from_junction(large_junction_energy: f64) -> f64 {
    let critical_current = 2.0 * PI * large_junction_energy;
    1.0 / (2.0 * PI * critical_current)
}

/// Position of a qubit in the chain, which fixes its tuning target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteRole {
    /// Λ = ½·Ē_J
    Interior,
    /// Λ = Ē_J
    Boundary,
}

impl SiteRole {
    fn josephson_weight(self) -> f64 {
        match self {
            SiteRole::Interior => 0.5,
            SiteRole::Boundary => 1.0,
        }
    }
}

/// Uniform flux Φ* at which a pair of identical qubits satisfies its tuning
/// condition.
///
/// The difference Λ(Φ) − w·Ē_J(Φ) is strictly increasing on `[0, 0.5]`, so
/// bisection on that bracket finds the unique crossing.
pub fn tune_flux(max_josephson: f64, coupler_inductance: f64, role: SiteRole) -> Result<f64> {
    if !(max_josephson > 0.0) || !(coupler_inductance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tune_flux needs E_J > 0 and L_J > 0 (got {max_josephson}, {coupler_inductance})"
        )));
    }
    let w = role.josephson_weight();
    let difference = |phi: f64| {
        let s = (PI * phi).sin();
        coupler_inductance * PI * PI * max_josephson * max_josephson * s * s
            - w * max_josephson * (PI * phi).cos()
    };
    let root = bisect(difference, 0.0, 0.5, 1e-17)?;
    let residual = difference(root).abs();
    if residual > 1e-12 * max_josephson {
        return Err(Error::InconsistentTuning(format!(
            "flux root residual {residual:e} above tolerance"
        )));
    }
    Ok(root)
}

/// Chain of charge qubits joined by a shared large-junction coupler.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    pub qubits: Vec<QubitParams>,
    pub coupler_inductance: f64,
}

impl ChainParams {
    pub fn new(qubits: Vec<QubitParams>, coupler_inductance: f64) -> Result<Self> {
        if qubits.len() < 2 {
            return Err(Error::InvalidParameter("a chain needs at least two qubits".into()));
        }
        if !(coupler_inductance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupler inductance must be positive, got {coupler_inductance}"
            )));
        }
        Ok(Self { qubits, coupler_inductance })
    }

    /// A chain tuned to the projector-form conditions at the degeneracy point.
    ///
    /// Interior qubits share `max_josephson` and the interior flux Φ*. For
    /// chains longer than two, the end qubits cannot reuse Φ* (they need
    /// Ē_J = Λ rather than ½Λ), so their flux solves
    /// cot(πΦ₁) = L_J·π²·E_J·sin(πΦ*) and their junction energy is rescaled to
    /// E_J·sin(πΦ*)/sin(πΦ₁) to keep every pair coupling equal.
    pub fn tuned(n: usize, charging_energy: f64, max_josephson: f64, coupler_inductance: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("a chain needs at least two qubits".into()));
        }
        let qubits = if n == 2 {
            let phi = tune_flux(max_josephson, coupler_inductance, SiteRole::Boundary)?;
            let q = QubitParams::new(charging_energy, max_josephson, 1.0, phi)?;
            vec![q, q]
        } else {
            let phi_in = tune_flux(max_josephson, coupler_inductance, SiteRole::Interior)?;
            let s_in = (PI * phi_in).sin();
            let k = coupler_inductance * PI * PI * max_josephson * s_in;
            let phi_end = bisect(|phi| (PI * phi).cos() - k * (PI * phi).sin(), 0.0, 0.5, 1e-17)?;
            let end_josephson = max_josephson * s_in / (PI * phi_end).sin();
            let end = QubitParams::new(charging_energy, end_josephson, 1.0, phi_end)?;
            let inner = QubitParams::new(charging_energy, max_josephson, 1.0, phi_in)?;
            let mut qubits = vec![end];
            qubits.extend(std::iter::repeat_n(inner, n - 2));
            qubits.push(end);
            qubits
        };
        Self::new(qubits, coupler_inductance)
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn role(&self, site: usize) -> SiteRole {
        if site == 0 || site + 1 == self.n_qubits() {
            SiteRole::Boundary
        } else {
            SiteRole::Interior
        }
    }

    /// Λ_{i,i+1}, 0-based.
    pub fn coupling(&self, i: usize) -> Result<f64> {
        coupling_strength(&self.qubits[i], &self.qubits[i + 1], self.coupler_inductance)
    }

    pub fn reversed(&self) -> Self {
        let mut qubits = self.qubits.clone();
        qubits.reverse();
        Self { qubits, coupler_inductance: self.coupler_inductance }
    }
}

/// g = 4Λ with ħ = 1, after checking every pair and every site implies the
/// same rate.
pub fn derive_g(chain: &ChainParams) -> Result<f64> {
    let mut rates: Vec<(String, f64)> = Vec::new();
    for i in 0..chain.n_qubits() - 1 {
        rates.push((format!("pair ({}, {})", i + 1, i + 2), 4.0 * chain.coupling(i)?));
    }
    for (i, q) in chain.qubits.iter().enumerate() {
        let ej = effective_josephson(q)?;
        let g = match chain.role(i) {
            SiteRole::Boundary => 4.0 * ej,
            SiteRole::Interior => 2.0 * ej,
        };
        rates.push((format!("qubit {}", i + 1), g));
    }
    let reference = rates[0].1;
    if !(reference > 0.0) {
        return Err(Error::InconsistentTuning(format!("non-positive rate {reference}")));
    }
    for (label, g) in &rates {
        if (g - reference).abs() > TUNING_REL_TOL * reference {
            return Err(Error::InconsistentTuning(format!(
                "{label} implies g = {g}, pair (1, 2) implies g = {reference}"
            )));
        }
    }
    Ok(reference)
}
