//! Cluster-state generation on a chain of capacitively coupled charge qubits.
//!
//! The chain Hamiltonian reduces to g·Σ Π_iΠ_{i+1} with Π = (I − σˣ)/2, whose
//! propagator at gt = π prepares a cluster state in one step. The crate covers
//! the dense linear algebra, the device model and its flux tuning, exact and
//! open-system evolution, stabilizer checks, fidelity metrics and the
//! experiment harness behind the `clustersim` binary.

pub mod charge_qubit;
pub mod cluster;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod hamiltonian;
pub mod linalg;
pub mod metrics;
pub mod roots;

pub use error::{Error, Result};
