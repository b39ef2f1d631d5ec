use ndarray::Array1;
use num_complex::Complex64 as C64;

use super::eigen::herm_eig;
use super::ComplexMatrix;
use crate::error::{Error, Result};

pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
pub const DENSITY_TRACE_TOL: f64 = 1e-8;
pub const DENSITY_EIGEN_TOL: f64 = 1e-8;

/// Which meaning of |±⟩ a state constructor relied on.
///
/// Amplitudes are always stored in the computational (charge) basis; the tag
/// only records how the producing routine interpreted the X-basis labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Built directly in the computational basis.
    Computational,
    /// |+⟩ = (|0⟩ + |1⟩)/√2, the σˣ eigenvalue +1 state.
    Standard,
    /// |+⟩ = (|0⟩ − |1⟩)/√2, the σˣ eigenvalue −1 state used for the chain.
    ChargeQubit,
}

/// Normalized pure state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Array1<C64>,
    convention: Convention,
}

impl StateVector {
    pub fn new(amplitudes: Array1<C64>, convention: Convention) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!("dimension {dim} is not a power of two")));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm_sqr} is not 1")));
        }
        Ok(Self { amplitudes, convention })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(amplitudes: Array1<C64>, convention: Convention) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amplitudes.mapv(|z| z / norm), convention)
    }

    pub fn from_real(amplitudes: &[f64], convention: Convention) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect(), convention)
    }

    /// Computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = Array1::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes, convention: Convention::Computational }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_dim(other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: dim });
        }
        Ok(())
    }

    /// Applies a matrix, re-normalizing away round-off.
    pub fn transformed(&self, op: &ComplexMatrix) -> Result<Self> {
        if op.cols() != self.dim() || op.rows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: op.cols() });
        }
        Self::normalized(op.apply(&self.amplitudes), self.convention)
    }

    pub fn scaled(&self, phase: C64) -> Self {
        Self { amplitudes: self.amplitudes.mapv(|z| z * phase), convention: self.convention }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// ‖self − other‖₂
    pub fn distance(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// |ψ⟩⟨ψ|
    pub fn projector(&self) -> DensityMatrix {
        let a = &self.amplitudes;
        let n = a.len();
        DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_fn(n, n, |i, j| a[i] * a[j].conj()))
    }
}

/// Phase-aligns `b` to `a`: returns e^{iφ}·b with ⟨a|e^{iφ}b⟩ real and positive.
pub fn phase_align(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let overlap = a.inner(b)?;
    if overlap.norm() < 1e-14 {
        return Err(Error::ZeroOverlap);
    }
    Ok(b.scaled(overlap.conj() / overlap.norm()))
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        matrix.ensure_hermitian(DENSITY_HERMITIAN_TOL)?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > DENSITY_TRACE_TOL || trace.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let eig = herm_eig(&matrix)?;
        if eig.values[0] < -DENSITY_EIGEN_TOL {
            return Err(Error::NegativeSpectrum(eig.values[0]));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; used by the integrator which checks on its own terms.
    pub fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        let a = self.matrix.as_array();
        a.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Re Tr(Aρ)
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        if op.rows() != self.dim() || op.cols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: op.rows() });
        }
        Ok(op.matmul(&self.matrix).trace().re)
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn overlap_with(&self, psi: &StateVector) -> Result<f64> {
        psi.check_dim(self.dim())?;
        let v = self.matrix.apply(psi.amplitudes());
        Ok(psi.amplitudes().iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum::<C64>().re)
    }

    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.cols() });
        }
        Ok(Self { matrix: u.matmul(&self.matrix).matmul(&u.adjoint()) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn rejects_unnormalized_and_bad_dims() {
        assert!(StateVector::from_real(&[1.0, 1.0], Convention::Computational).is_err());
        assert!(StateVector::from_real(&[1.0, 0.0, 0.0], Convention::Computational).is_err());
        assert!(StateVector::normalized(Array1::zeros(2), Convention::Computational).is_err());
    }

    #[test]
    fn phase_align_identity_and_pure_phase() {
        let a = StateVector::from_real(&[0.6, 0.0, 0.0, 0.8], Convention::Computational).unwrap();
        let same = phase_align(&a, &a).unwrap();
        assert!(same.max_abs_diff(&a) < 1e-15);
        let rotated = a.scaled(C64::from_polar(1.0, PI / 3.0));
        let back = phase_align(&a, &rotated).unwrap();
        assert!(back.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn phase_align_orthogonal_fails() {
        let a = StateVector::basis(1, 0);
        let b = StateVector::basis(1, 1);
        assert!(matches!(phase_align(&a, &b), Err(Error::ZeroOverlap)));
    }

    #[test]
    fn density_validation() {
        let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], Convention::Standard).unwrap();
        let rho = DensityMatrix::new(plus.projector().into_matrix()).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!(DensityMatrix::new(ComplexMatrix::real_diagonal(&[0.7, 0.7])).is_err());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::real_diagonal(&[1.1, -0.1])),
            Err(Error::NegativeSpectrum(_))
        ));
        assert!((DensityMatrix::maximally_mixed(2).purity() - 0.25).abs() < 1e-15);
    }
}
