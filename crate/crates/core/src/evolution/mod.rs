//! Time evolution: the exact factorized propagator and the open-system
//! master-equation integrator.

pub mod master;
pub mod noise;
pub mod unitary;

pub use master::{
    integrate_master, integrate_with, lindblad_rhs, sample_count, EvolutionTrajectory, IntegrationDiagnostics,
    Lindbladian,
};
pub use noise::{collapse_operators, lowering, DecayRates, NoiseModel, REFERENCE_T1_US, REFERENCE_T2_US};
pub use unitary::{evolve_pure, unitary_exact, unitary_exact_ordered};
