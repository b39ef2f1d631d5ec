//! Consistency suite run by `clustersim verify`: propagator against the
//! eigendecomposition, the three constructions of the target state,
//! stabilizers, and raw versus projector-form Hamiltonians.

use std::f64::consts::PI;

use crate::charge_qubit::{derive_g, ChainParams};
use crate::cluster::{cluster_product_form, cluster_standard, hadamard_map, initial_state, stabilizer_set, verify_stabilizers};
use crate::error::Result;
use crate::evolution::{evolve_pure, unitary_exact};
use crate::hamiltonian::{build_projector_form, build_raw, equivalence_shift, pairwise_commutators, pauli_string, Pauli};
use crate::linalg::expm_oracle;
use crate::metrics::fidelity_pure;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub n_qubits: usize,
    pub passed: bool,
    /// Worst deviation observed.
    pub worst: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &str, n_qubits: usize, worst: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), n_qubits, passed: worst <= tolerance, worst, tolerance }
    }
}

/// Charging and Josephson energies for the tuned test chain, in units of E_J.
const CHAIN_CHARGING: f64 = 20.0;
const CHAIN_JOSEPHSON: f64 = 1.0;

/// Phases at which propagators are compared.
const PHASES: [f64; 5] = [0.3, 1.0, PI, 2.5, 7.0];

pub fn verify_suite(max_n: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 2..=max_n {
        if n <= 5 {
            let h = build_projector_form(n, 1.0)?;
            let mut worst: f64 = 0.0;
            for &phase in &PHASES {
                worst = worst.max(unitary_exact(n, phase)?.max_abs_diff(&expm_oracle(&h, phase)?));
            }
            checks.push(Check::new("propagator vs exp(-iHt)", n, worst, 1e-9));
        }

        checks.push(Check::new("bond terms commute", n, pairwise_commutators(n)?, 1e-14));

        let product = cluster_product_form(n)?;
        let evolved = evolve_pure(&initial_state(n)?, n, PI)?;
        let mapped = hadamard_map(&cluster_standard(n)?);
        let deficit = [
            1.0 - fidelity_pure(&product, &evolved)?,
            1.0 - fidelity_pure(&product, &mapped)?,
            1.0 - fidelity_pure(&evolved, &mapped)?,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        checks.push(Check::new("target state constructions agree", n, deficit, 1e-10));

        let stabs = stabilizer_set(n)?;
        let standard = verify_stabilizers(&cluster_standard(n)?, &stabs)?;
        let from_evolution = verify_stabilizers(&hadamard_map(&evolved), &stabs)?;
        checks.push(Check::new(
            "stabilizers",
            n,
            standard.worst_residual.max(from_evolution.worst_residual),
            1e-9,
        ));

        let mut misflagged = 0usize;
        let cluster = cluster_standard(n)?;
        for site in 0..n {
            let damaged = cluster.transformed(&pauli_string(n, &[(site, Pauli::Z)])?)?;
            if verify_stabilizers(&damaged, &stabs)?.failing(&stabs) != vec![site] {
                misflagged += 1;
            }
        }
        checks.push(Check::new("single Z error flips its generator", n, misflagged as f64, 0.0));

        let chain = ChainParams::tuned(n, CHAIN_CHARGING, CHAIN_JOSEPHSON, 1.0 / (PI * PI))?;
        let g = derive_g(&chain)?;
        let raw = build_raw(&chain)?;
        let projector = build_projector_form(n, g)?;
        let shift = equivalence_shift(&raw, &projector, n, g)?;
        checks.push(Check::new("raw Hamiltonian shift", n, (shift - (n as f64 - 1.0) * g / 4.0).abs(), 1e-10));

        let psi0 = initial_state(n)?;
        let mut worst: f64 = 0.0;
        for &phase in &PHASES {
            let t = phase / g;
            let a = psi0.transformed(&expm_oracle(&raw, t)?)?;
            let b = psi0.transformed(&expm_oracle(&projector, t)?)?;
            worst = worst.max(1.0 - fidelity_pure(&a, &b)?);
        }
        checks.push(Check::new("raw and projector dynamics agree", n, worst, 1e-9));
    }
    Ok(checks)
}
