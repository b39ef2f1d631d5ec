use std::fmt;
use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: Array2<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self { data: Array2::zeros((rows, cols)) }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "matrix dimensions must be positive");
        Self { data: Array2::eye(n) }
    }

    pub fn from_array(data: Array2<C64>) -> Self {
        assert!(data.nrows() >= 1 && data.ncols() >= 1, "matrix dimensions must be positive");
        Self { data }
    }

    /// Builds a matrix from nested rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut f = f;
        Self::from_array(Array2::from_shape_fn((rows, cols), |(i, j)| f(i, j)))
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn as_array_mut(&mut self) -> &mut Array2<C64> {
        &mut self.data
    }

    pub fn into_array(self) -> Array2<C64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[[i, j]]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.data[[i, j]] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.t().mapv(|z| z.conj()) }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols(), other.rows(), "matmul dimension mismatch");
        Self { data: self.data.dot(&other.data) }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { data: &self.data * factor }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.data.diag().sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.data.dim(), other.data.dim(), "shape mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |A - A†|; infinite for non-square input.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[[i, j]] - self.data[[j, i]].conj()).norm());
            }
        }
        worst
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let err = self.hermiticity_error();
        if err > tol {
            return Err(Error::NotHermitian(err));
        }
        Ok(())
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Self { data: (&self.data + &adj.data) * C64::new(0.5, 0.0) }
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        assert_eq!(self.cols(), v.len(), "matrix-vector dimension mismatch");
        self.data.dot(v)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.data)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix { data: &self.data + &rhs.data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix { data: &self.data - &rhs.data }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product: entry (i·p + k, j·q + l) = a_ij · b_kl.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.rows(), a.cols());
    let (p, q) = (b.rows(), b.cols());
    let mut out = Array2::<C64>::zeros((m * p, n * q));
    for i in 0..m {
        for j in 0..n {
            let aij = a.data[[i, j]];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..p {
                for l in 0..q {
                    out[[i * p + k, j * q + l]] = aij * b.data[[k, l]];
                }
            }
        }
    }
    ComplexMatrix { data: out }
}

/// Left-to-right Kronecker product of a non-empty list.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut iter = factors.into_iter();
    let first = iter.next().expect("kron_all needs at least one factor").clone();
    iter.fold(first, |acc, m| kron(&acc, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn projector_tensor_identity_block_structure() {
        // ½(I - X) ⊗ I
        let p = ComplexMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]]);
        let k = kron(&p, &ComplexMatrix::identity(2));
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.5, 0.0, -0.5, 0.0],
            &[0.0, 0.5, 0.0, -0.5],
            &[-0.5, 0.0, 0.5, 0.0],
            &[0.0, -0.5, 0.0, 0.5],
        ]);
        assert!(k.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn kron_matches_index_loop() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c(1.0 + i as f64, 0.3 * j as f64 - 0.1));
        let b = ComplexMatrix::from_fn(2, 2, |i, j| c(-0.7 * j as f64, 2.0 - i as f64));
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k.get(i * 2 + p, j * 2 + q), a.get(i, j) * b.get(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn rectangular_kron_shape() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(4, 1);
        let k = kron(&a, &b);
        assert_eq!((k.rows(), k.cols()), (8, 3));
    }

    #[test]
    fn hermitian_part_is_hermitian() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64 - j as f64 * 0.5, (i * j) as f64));
        assert!(a.hermiticity_error() > 0.1);
        assert!(a.hermitian_part().hermiticity_error() < 1e-15);
        assert!(matches!(a.ensure_hermitian(1e-10), Err(Error::NotHermitian(_))));
    }
}
