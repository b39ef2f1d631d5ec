//! Exact propagator of the projector-form Hamiltonian.
//!
//! The bond terms Π_iΠ_{i+1} commute and are idempotent, so
//! exp(−i·gt·Σ Π_iΠ_{i+1}) = ∏ [I + (e^{−i·gt} − 1)·Π_iΠ_{i+1}].

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::hamiltonian::pair_projector;
use crate::linalg::{ComplexMatrix, StateVector, C64};

fn bond_factor_weight(phase: f64) -> C64 {
    C64::from_polar(1.0, -phase) - C64::new(1.0, 0.0)
}

/// U(t) for dimensionless phase `gt`.
pub fn unitary_exact(n: usize, phase: f64) -> Result<ComplexMatrix> {
    let order: Vec<usize> = (0..n.saturating_sub(1)).collect();
    unitary_exact_ordered(n, phase, &order)
}

/// Same product with the bond factors multiplied in the given order.
pub fn unitary_exact_ordered(n: usize, phase: f64, bond_order: &[usize]) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least two qubits, got {n}")));
    }
    let dim = 1usize << n;
    let weight = bond_factor_weight(phase);
    let mut u = ComplexMatrix::identity(dim);
    for &bond in bond_order {
        let p = pair_projector(bond, n)?;
        // U·(I + wP) = U + w·(U·P)
        u = &u + &u.matmul(&p).scale(weight);
    }
    Ok(u)
}

/// (Π_site v)[x] = ½(v[x] − v[x ⊕ bit(site)])
fn apply_site_projector(v: &Array1<C64>, site: usize, n: usize) -> Array1<C64> {
    let mask = 1usize << (n - 1 - site);
    Array1::from_shape_fn(v.len(), |x| (v[x] - v[x ^ mask]) * 0.5)
}

/// U(t)|ψ⟩, applying each bond factor to the vector directly.
pub fn evolve_pure(state: &StateVector, n: usize, phase: f64) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least two qubits, got {n}")));
    }
    state.check_dim(1usize << n)?;
    let weight = bond_factor_weight(phase);
    let mut v = state.amplitudes().clone();
    for bond in 0..n - 1 {
        let pv = apply_site_projector(&apply_site_projector(&v, bond, n), bond + 1, n);
        v = &v + &pv.mapv(|z| z * weight);
    }
    StateVector::normalized(v, state.convention())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_projector_form;
    use crate::linalg::{expm_oracle, Convention};
    use std::f64::consts::PI;

    fn unitarity_error(u: &ComplexMatrix) -> f64 {
        u.adjoint().matmul(u).max_abs_diff(&ComplexMatrix::identity(u.rows()))
    }

    #[test]
    fn zero_phase_is_identity() {
        for n in 2..=5 {
            assert!(unitary_exact(n, 0.0).unwrap().max_abs_diff(&ComplexMatrix::identity(1 << n)) < 1e-15);
        }
    }

    #[test]
    fn phase_pi_is_product_of_reflections() {
        for n in 2..=5 {
            let dim = 1 << n;
            let mut expected = ComplexMatrix::identity(dim);
            for i in 0..n - 1 {
                let reflection = &ComplexMatrix::identity(dim) - &pair_projector(i, n).unwrap().scale_real(2.0);
                expected = expected.matmul(&reflection);
            }
            let u = unitary_exact(n, PI).unwrap();
            assert!(u.max_abs_diff(&expected) < 1e-14);
            assert!(unitarity_error(&u) < 1e-10);
        }
    }

    #[test]
    fn full_revival_at_two_pi() {
        for n in 2..=5 {
            let u = unitary_exact(n, 2.0 * PI).unwrap();
            assert!(u.max_abs_diff(&ComplexMatrix::identity(1 << n)) <= 1e-12);
        }
    }

    #[test]
    fn periodic_in_phase() {
        for &phase in &[0.3, 1.7, 4.0, -2.2] {
            let a = unitary_exact(4, phase).unwrap();
            let b = unitary_exact(4, phase + 2.0 * PI).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-10);
        }
    }

    #[test]
    fn factor_order_is_irrelevant() {
        let base = unitary_exact(5, 1.234).unwrap();
        for order in [[3usize, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
            let other = unitary_exact_ordered(5, 1.234, &order).unwrap();
            assert!(base.max_abs_diff(&other) <= 1e-12);
        }
    }

    #[test]
    fn matches_spectral_exponential() {
        for n in 2..=4 {
            let h = build_projector_form(n, 1.0).unwrap();
            for &phase in &[0.1, 1.0, PI, 5.5] {
                let exact = unitary_exact(n, phase).unwrap();
                let brute = expm_oracle(&h, phase).unwrap();
                assert!(exact.max_abs_diff(&brute) <= 1e-9);
            }
        }
    }

    #[test]
    fn all_minus_state_is_stationary() {
        let n = 4;
        let uniform = StateVector::normalized(Array1::from_elem(16, C64::new(1.0, 0.0)), Convention::ChargeQubit).unwrap();
        for &phase in &[0.4, PI, 7.0] {
            let out = evolve_pure(&uniform, n, phase).unwrap();
            assert!(out.max_abs_diff(&uniform) < 1e-14);
        }
    }

    #[test]
    fn two_qubit_pi_evolution() {
        let out = evolve_pure(&StateVector::basis(2, 0), 2, PI).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (k, e) in expected.iter().enumerate() {
            assert!((out.amplitude(k) - C64::new(*e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn four_qubit_pi_overlap_with_initial() {
        let out = evolve_pure(&StateVector::basis(4, 0), 4, PI).unwrap();
        assert!((out.amplitude(0).norm_sqr() - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn vector_evolution_matches_matrix() {
        let psi = StateVector::normalized(
            (0..32).map(|k| C64::new((k as f64).cos(), (0.3 * k as f64).sin())).collect(),
            Convention::Computational,
        )
        .unwrap();
        for &phase in &[0.2, 2.9, 6.0] {
            let via_matrix = psi.transformed(&unitary_exact(5, phase).unwrap()).unwrap();
            let via_vector = evolve_pure(&psi, 5, phase).unwrap();
            assert!(via_matrix.max_abs_diff(&via_vector) <= 1e-12);
        }
    }

    #[test]
    fn dimension_checked() {
        assert!(matches!(
            evolve_pure(&StateVector::basis(3, 0), 4, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
