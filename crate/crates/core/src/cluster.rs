//! Linear cluster states: the two independent constructions, the Hadamard
//! map between them, and stabilizer checks.

use std::f64::consts::FRAC_1_SQRT_2;

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::hamiltonian::{pauli_string, Pauli};
use crate::linalg::{ComplexMatrix, Convention, DensityMatrix, StateVector, C64};

/// Eigenstates of σˣ under a given labelling. Amplitudes are (⟨0|·⟩, ⟨1|·⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisConvention {
    pub plus_state: [f64; 2],
    pub minus_state: [f64; 2],
}

impl BasisConvention {
    /// |+⟩ = (|0⟩ − |1⟩)/√2, σˣ|+⟩ = −|+⟩.
    pub const CHARGE_QUBIT: Self =
        Self { plus_state: [FRAC_1_SQRT_2, -FRAC_1_SQRT_2], minus_state: [FRAC_1_SQRT_2, FRAC_1_SQRT_2] };
    /// |+⟩ = (|0⟩ + |1⟩)/√2, σˣ|+⟩ = |+⟩.
    pub const STANDARD: Self =
        Self { plus_state: [FRAC_1_SQRT_2, FRAC_1_SQRT_2], minus_state: [FRAC_1_SQRT_2, -FRAC_1_SQRT_2] };

    /// σˣ eigenvalue of the state labelled |+⟩.
    pub fn plus_eigenvalue(&self) -> f64 {
        let [a, b] = self.plus_state;
        // ⟨+|σˣ|+⟩ = 2ab for real amplitudes
        2.0 * a * b
    }
}

fn bit(index: usize, site: usize, n: usize) -> usize {
    (index >> (n - 1 - site)) & 1
}

fn require_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParameter(format!("need at least {min} qubits, got {n}")));
    }
    Ok(())
}

/// |0…0⟩
pub fn initial_state(n: usize) -> Result<StateVector> {
    require_n(n, 1)?;
    Ok(StateVector::basis(n, 0))
}

/// Σ_x (−1)^{Σ x_i x_{i+1}} |x⟩ / 2^{n/2}
pub fn cluster_standard(n: usize) -> Result<StateVector> {
    require_n(n, 2)?;
    let dim = 1usize << n;
    let norm = (dim as f64).sqrt().recip();
    let amps: Array1<C64> = (0..dim)
        .map(|x| {
            let parity: usize = (0..n - 1).map(|i| bit(x, i, n) & bit(x, i + 1, n)).sum();
            let sign = if parity.is_multiple_of(2) { 1.0 } else { -1.0 };
            C64::new(sign * norm, 0.0)
        })
        .collect();
    StateVector::new(amps, Convention::Standard)
}

/// The chain's target state, ∏ U_{i,i+1} |0…0⟩ with U_{i,i+1} = I − 2Π_iΠ_{i+1}.
///
/// Works in the charge-qubit X basis: |0⟩ = (|−⟩ + |+⟩)/√2 gives a uniform
/// superposition over ±-strings, each bond flips the sign of strings with
/// `++` on that bond, and the result is expanded back into the computational
/// basis through the convention's |±⟩ amplitudes.
pub fn cluster_product_form(n: usize) -> Result<StateVector> {
    require_n(n, 2)?;
    let dim = 1usize << n;
    let conv = BasisConvention::CHARGE_QUBIT;
    // Bit value 1 at a site means |+⟩ there.
    let mut xs: Vec<f64> = vec![(dim as f64).sqrt().recip(); dim];
    for i in 0..n - 1 {
        for (s, amp) in xs.iter_mut().enumerate() {
            if bit(s, i, n) == 1 && bit(s, i + 1, n) == 1 {
                *amp = -*amp;
            }
        }
    }
    let mut computational = vec![0.0; dim];
    for (s, &a) in xs.iter().enumerate() {
        for (c, out) in computational.iter_mut().enumerate() {
            let mut w = a;
            for site in 0..n {
                let single = if bit(s, site, n) == 1 { conv.plus_state } else { conv.minus_state };
                w *= single[bit(c, site, n)];
            }
            *out += w;
        }
    }
    StateVector::new(computational.into_iter().map(|r| C64::new(r, 0.0)).collect(), Convention::ChargeQubit)
}

/// H^{⊗n}|ψ⟩ via per-qubit butterflies.
pub fn hadamard_map(state: &StateVector) -> StateVector {
    let n = state.n_qubits();
    let mut v = state.amplitudes().clone();
    for site in 0..n {
        let mask = 1usize << (n - 1 - site);
        for x in 0..v.len() {
            if x & mask == 0 {
                let (a, b) = (v[x], v[x | mask]);
                v[x] = (a + b) * FRAC_1_SQRT_2;
                v[x | mask] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }
    let convention = match state.convention() {
        Convention::Standard => Convention::ChargeQubit,
        Convention::ChargeQubit => Convention::Standard,
        Convention::Computational => Convention::Computational,
    };
    StateVector::normalized(v, convention).expect("Hadamard map preserves the norm")
}

/// H^{⊗n} as a dense matrix.
pub fn hadamard_matrix(n: usize) -> ComplexMatrix {
    let h = ComplexMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]);
    let factors: Vec<ComplexMatrix> = (0..n).map(|_| h.clone()).collect();
    crate::linalg::kron_all(&factors)
}

/// H^{⊗n} ρ H^{⊗n}
pub fn hadamard_conjugate(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let n = rho.dim().trailing_zeros() as usize;
    rho.conjugated_by(&hadamard_matrix(n))
}

#[derive(Debug, Clone)]
pub struct Stabilizer {
    /// e.g. "Z1 X2 Z3" (1-based sites).
    pub label: String,
    /// Site carrying the X factor, 0-based.
    pub center: usize,
    pub operator: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct StabilizerSet {
    pub n_qubits: usize,
    pub generators: Vec<Stabilizer>,
}

/// S_1 = X₁Z₂, S_i = Z_{i−1}X_iZ_{i+1}, S_N = Z_{N−1}X_N.
pub fn stabilizer_set(n: usize) -> Result<StabilizerSet> {
    require_n(n, 2)?;
    let mut generators = Vec::with_capacity(n);
    for i in 0..n {
        let mut factors = Vec::with_capacity(3);
        if i > 0 {
            factors.push((i - 1, Pauli::Z));
        }
        factors.push((i, Pauli::X));
        if i + 1 < n {
            factors.push((i + 1, Pauli::Z));
        }
        let label = factors
            .iter()
            .map(|(site, p)| format!("{}{}", p.symbol(), site + 1))
            .collect::<Vec<_>>()
            .join(" ");
        generators.push(Stabilizer { label, center: i, operator: pauli_string(n, &factors)? });
    }
    Ok(StabilizerSet { n_qubits: n, generators })
}

#[derive(Debug, Clone)]
pub struct StabilizerReport {
    pub pass: bool,
    pub worst_residual: f64,
    /// ‖S_i|ψ⟩ − |ψ⟩‖ per generator.
    pub residuals: Vec<f64>,
}

impl StabilizerReport {
    /// 0-based centers of generators above the tolerance.
    pub fn failing(&self, set: &StabilizerSet) -> Vec<usize> {
        self.residuals
            .iter()
            .zip(&set.generators)
            .filter(|(r, _)| **r > STABILIZER_TOL)
            .map(|(_, g)| g.center)
            .collect()
    }
}

pub const STABILIZER_TOL: f64 = 1e-9;
pub const STABILIZER_EXPECTATION_TOL: f64 = 1e-8;

pub fn verify_stabilizers(state: &StateVector, stabs: &StabilizerSet) -> Result<StabilizerReport> {
    state.check_dim(1usize << stabs.n_qubits)?;
    let residuals: Vec<f64> = stabs
        .generators
        .iter()
        .map(|s| {
            let image = s.operator.apply(state.amplitudes());
            image
                .iter()
                .zip(state.amplitudes().iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let worst_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(StabilizerReport { pass: worst_residual <= STABILIZER_TOL, worst_residual, residuals })
}

/// Tr(S_i ρ) for each generator.
pub fn stabilizer_expectations(rho: &DensityMatrix, stabs: &StabilizerSet) -> Result<Vec<f64>> {
    stabs.generators.iter().map(|s| rho.expectation(&s.operator)).collect()
}

/// Mixed-state check: every Tr(S_i ρ) within 1e−8 of one.
pub fn verify_stabilizers_mixed(rho: &DensityMatrix, stabs: &StabilizerSet) -> Result<(bool, f64)> {
    let worst = stabilizer_expectations(rho, stabs)?.into_iter().map(|e| (1.0 - e).abs()).fold(0.0, f64::max);
    Ok((worst <= STABILIZER_EXPECTATION_TOL, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::evolve_pure;
    use crate::linalg::phase_align;
    use crate::metrics::fidelity_pure;
    use std::f64::consts::PI;

    #[test]
    fn conventions() {
        assert!((BasisConvention::CHARGE_QUBIT.plus_eigenvalue() + 1.0).abs() < 1e-15);
        assert!((BasisConvention::STANDARD.plus_eigenvalue() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn initial_states() {
        assert_eq!(initial_state(1).unwrap().amplitudes().to_vec(), vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let s = initial_state(2).unwrap();
        assert_eq!(s.amplitude(0), C64::new(1.0, 0.0));
        assert!((1..4).all(|k| s.amplitude(k) == C64::new(0.0, 0.0)));
        assert!(initial_state(0).is_err());
    }

    #[test]
    fn initial_state_x_basis_expansion() {
        // 2^{−n/2} Σ over all ±-strings of the charge-qubit |±⟩ products.
        let n = 3;
        let conv = BasisConvention::CHARGE_QUBIT;
        let mut sum = vec![0.0; 8];
        for s in 0..8 {
            for (c, out) in sum.iter_mut().enumerate() {
                let mut w = (8f64).sqrt().recip();
                for site in 0..n {
                    let single = if bit(s, site, n) == 1 { conv.plus_state } else { conv.minus_state };
                    w *= single[bit(c, site, n)];
                }
                *out += w;
            }
        }
        let init = initial_state(n).unwrap();
        for c in 0..8 {
            assert!((init.amplitude(c).re - sum[c]).abs() < 1e-15);
        }
    }

    #[test]
    fn standard_cluster_amplitudes() {
        let c2 = cluster_standard(2).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        assert!((0..4).all(|k| (c2.amplitude(k).re - expected[k]).abs() < 1e-15));
        let c3 = cluster_standard(3).unwrap();
        let a = 1.0 / (2.0 * 2f64.sqrt());
        // x1x2 + x2x3 odd for 011, 110 only (111 has two adjacent pairs).
        for x in 0..8 {
            let sign = if x == 0b011 || x == 0b110 { -1.0 } else { 1.0 };
            assert!((c3.amplitude(x).re - sign * a).abs() < 1e-15, "index {x:03b}");
        }
        assert!((cluster_standard(4).unwrap().amplitude(0).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn product_form_two_qubits() {
        let p = cluster_product_form(2).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        assert!((0..4).all(|k| (p.amplitude(k) - C64::new(expected[k], 0.0)).norm() < 1e-15));
        assert_eq!(p.convention(), Convention::ChargeQubit);
    }

    #[test]
    fn product_form_matches_evolution_at_pi() {
        for n in 2..=6 {
            let built = cluster_product_form(n).unwrap();
            let evolved = evolve_pure(&initial_state(n).unwrap(), n, PI).unwrap();
            assert!((fidelity_pure(&built, &evolved).unwrap() - 1.0).abs() <= 1e-10);
        }
        let p4 = cluster_product_form(4).unwrap();
        assert!((p4.amplitude(0).norm_sqr() - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_on_charge_qubit_basis() {
        let h = FRAC_1_SQRT_2;
        let plus = StateVector::from_real(&[h, -h], Convention::ChargeQubit).unwrap();
        let minus = StateVector::from_real(&[h, h], Convention::ChargeQubit).unwrap();
        assert!(hadamard_map(&plus).max_abs_diff(&StateVector::basis(1, 1)) < 1e-15);
        assert!(hadamard_map(&minus).max_abs_diff(&StateVector::basis(1, 0)) < 1e-15);
    }

    #[test]
    fn hadamard_is_involutive_and_matches_matrix() {
        let psi = StateVector::normalized(
            (0..16).map(|k| C64::new((k as f64).sin(), (k as f64 * 0.7).cos())).collect(),
            Convention::Computational,
        )
        .unwrap();
        assert!(hadamard_map(&hadamard_map(&psi)).max_abs_diff(&psi) <= 1e-12);
        let via_matrix = psi.transformed(&hadamard_matrix(4)).unwrap();
        assert!(via_matrix.max_abs_diff(&hadamard_map(&psi)) < 1e-14);
    }

    #[test]
    fn hadamard_maps_product_form_to_standard() {
        for n in 2..=6 {
            let mapped = hadamard_map(&cluster_product_form(n).unwrap());
            let standard = cluster_standard(n).unwrap();
            let aligned = phase_align(&standard, &mapped).unwrap();
            assert!(aligned.max_abs_diff(&standard) <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn product_form_needs_hadamard_beyond_two_qubits() {
        for n in 3..=5 {
            let f = fidelity_pure(&cluster_product_form(n).unwrap(), &cluster_standard(n).unwrap()).unwrap();
            assert!(f < 1.0 - 1e-3);
        }
    }

    #[test]
    fn generator_labels() {
        let s2 = stabilizer_set(2).unwrap();
        let labels: Vec<&str> = s2.generators.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, vec!["X1 Z2", "Z1 X2"]);
        let s3 = stabilizer_set(3).unwrap();
        assert_eq!(s3.generators[1].label, "Z1 X2 Z3");
        assert_eq!(s3.generators.len(), 3);
    }

    #[test]
    fn generators_commute_and_square_to_identity() {
        let set = stabilizer_set(5).unwrap();
        let id = ComplexMatrix::identity(32);
        for (a, ga) in set.generators.iter().enumerate() {
            assert!(ga.operator.matmul(&ga.operator).max_abs_diff(&id) < 1e-15);
            for gb in &set.generators[a + 1..] {
                assert!(ga.operator.commutator(&gb.operator).max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn standard_cluster_is_stabilized() {
        for n in 2..=6 {
            let report = verify_stabilizers(&cluster_standard(n).unwrap(), &stabilizer_set(n).unwrap()).unwrap();
            assert!(report.pass);
            assert!(report.worst_residual <= 1e-12);
        }
    }

    #[test]
    fn product_state_is_not_stabilized() {
        let report = verify_stabilizers(&initial_state(4).unwrap(), &stabilizer_set(4).unwrap()).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn phase_flip_breaks_only_its_generator() {
        let n = 3;
        let set = stabilizer_set(n).unwrap();
        for site in 0..n {
            let z = pauli_string(n, &[(site, Pauli::Z)]).unwrap();
            let flipped = cluster_standard(n).unwrap().transformed(&z).unwrap();
            let report = verify_stabilizers(&flipped, &set).unwrap();
            assert!(!report.pass);
            assert_eq!(report.failing(&set), vec![site]);
        }
    }

    #[test]
    fn mixed_expectations() {
        let set = stabilizer_set(3).unwrap();
        let rho = cluster_standard(3).unwrap().projector();
        let (pass, worst) = verify_stabilizers_mixed(&rho, &set).unwrap();
        assert!(pass && worst < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(3);
        let e = stabilizer_expectations(&mixed, &set).unwrap();
        assert!(e.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(verify_stabilizers(&initial_state(3).unwrap(), &stabilizer_set(4).unwrap()).is_err());
    }
}
