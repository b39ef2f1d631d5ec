//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, plus the
//! spectral functions built on it.

use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Hermiticity tolerance on inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues at or above this are clamped to zero by `psd_sqrt`.
pub const NEGATIVE_SPECTRUM_TOL: f64 = 1e-6;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V f(Λ) V†
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.values.len();
        let v = self.vectors.as_array();
        let weights: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[[i, k]] * weights[k] * v[[j, k]].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| C64::new(l, 0.0))
    }
}

pub fn herm_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    a.ensure_hermitian(HERMITIAN_TOL)?;
    Ok(jacobi(a))
}

fn off_diagonal_norm_sqr(a: &ndarray::Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[[i, j]].norm_sqr();
            }
        }
    }
    s
}

fn jacobi(input: &ComplexMatrix) -> HermitianEigen {
    let n = input.rows();
    let mut a = input.hermitian_part().into_array();
    let mut v = ndarray::Array2::<C64>::eye(n);

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().max(f64::MIN_POSITIVE);
    let threshold = scale * 1e-32;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let r = apq.norm();
                if r <= f64::MIN_POSITIVE || r * r <= threshold * 1e-4 {
                    continue;
                }
                // Remove the phase of a_pq, then apply a real Jacobi rotation:
                // G = diag(1, conj(w)) · [[c, s], [-s, c]] on the (p, q) plane.
                let w = apq / r;
                let alpha = a[[p, p]].re;
                let beta = a[[q, q]].re;
                let theta = (beta - alpha) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = -w.conj() * s;
                let g_qq = w.conj() * c;

                // A <- A G
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = akp * g_pp + akq * g_qp;
                    a[[k, q]] = akp * g_pq + akq * g_qq;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[[q, k]] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[[p, q]] = C64::new(0.0, 0.0);
                a[[q, p]] = C64::new(0.0, 0.0);
                a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = C64::new(a[[q, q]].re, 0.0);
                // V <- V G
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = vkp * g_pp + vkq * g_qp;
                    v[[k, q]] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.total_cmp(&a[[j, j]].re));
    let values = order.iter().map(|&i| a[[i, i]].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[[i, order[j]]]);
    HermitianEigen { values, vectors }
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    if let Some(&min) = eig.values.first() {
        if min < -NEGATIVE_SPECTRUM_TOL {
            return Err(Error::NegativeSpectrum(min));
        }
    }
    Ok(eig.map_spectrum(|l| C64::new(l.max(0.0).sqrt(), 0.0)))
}

/// exp(-iθH) through the spectral decomposition of `h`.
///
/// Brute-force reference for the factorized propagators; only used to
/// cross-check them.
pub fn expm_oracle(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(h)?;
    Ok(eig.map_spectrum(|l| C64::from_polar(1.0, -theta * l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        a.hermitian_part()
    }

    fn unitarity_error(v: &ComplexMatrix) -> f64 {
        v.adjoint().matmul(v).max_abs_diff(&ComplexMatrix::identity(v.rows()))
    }

    #[test]
    fn pauli_z_spectrum() {
        let z = ComplexMatrix::real_diagonal(&[1.0, -1.0]);
        let eig = herm_eig(&z).unwrap();
        assert_eq!(eig.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum_and_minus_one_eigenvector() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let eig = herm_eig(&x).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        // Eigenvector for -1 is proportional to (1, -1)/√2.
        let v0 = eig.vectors.get(0, 0);
        let v1 = eig.vectors.get(1, 0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v0.norm() - h).abs() < 1e-12);
        assert!((v1 + v0).norm() < 1e-12);
    }

    #[test]
    fn random_reconstruction_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[2usize, 3, 8, 16, 64] {
            let a = random_hermitian(n, &mut rng);
            let eig = herm_eig(&a).unwrap();
            assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-9, "n = {n}");
            assert!(unitarity_error(&eig.vectors) <= 1e-9, "n = {n}");
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // Projector-like matrix with a threefold-degenerate zero eigenvalue.
        let v = [0.5, -0.5, 0.5, -0.5];
        let p = ComplexMatrix::from_fn(4, 4, |i, j| C64::new(v[i] * v[j], 0.0));
        let eig = herm_eig(&p).unwrap();
        assert!(eig.values[..3].iter().all(|l| l.abs() < 1e-14));
        assert!((eig.values[3] - 1.0).abs() < 1e-14);
        assert!(unitarity_error(&eig.vectors) <= 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(herm_eig(&a), Err(Error::NotHermitian(_))));
        assert!(matches!(psd_sqrt(&a), Err(Error::NotHermitian(_))));
        assert!(matches!(expm_oracle(&a, 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let i = ComplexMatrix::identity(3);
        assert!(psd_sqrt(&i).unwrap().max_abs_diff(&i) < 1e-15);
        let d = ComplexMatrix::real_diagonal(&[4.0, 9.0]);
        let expected = ComplexMatrix::real_diagonal(&[2.0, 3.0]);
        assert!(psd_sqrt(&d).unwrap().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn sqrt_square_back_on_mixture() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 8;
        let mut rho = ComplexMatrix::zeros(n, n);
        let weights = [0.5, 0.3, 0.2];
        for &w in &weights {
            let psi: Vec<C64> = (0..n)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let outer = ComplexMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
            rho = &rho + &outer.scale_real(w);
        }
        let root = psd_sqrt(&rho).unwrap();
        assert!(root.hermiticity_error() < 1e-12);
        assert!(root.matmul(&root).max_abs_diff(&rho) <= 1e-8);
        // Rank-3 input: the five null directions stay (near) zero.
        let eig = herm_eig(&root).unwrap();
        assert!(eig.values.iter().all(|&l| l > -1e-8));
    }

    #[test]
    fn sqrt_clamps_round_off_but_rejects_real_negatives() {
        let tiny = ComplexMatrix::real_diagonal(&[1.0, -1e-9]);
        let root = psd_sqrt(&tiny).unwrap();
        assert_eq!(root.get(1, 1), C64::new(0.0, 0.0));
        let bad = ComplexMatrix::real_diagonal(&[1.0, -1e-3]);
        assert!(matches!(psd_sqrt(&bad), Err(Error::NegativeSpectrum(_))));
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = ComplexMatrix::zeros(4, 4);
        assert!(expm_oracle(&z, 3.0).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn expm_of_projector_at_pi() {
        let p = ComplexMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]]);
        let u = expm_oracle(&p, std::f64::consts::PI).unwrap();
        let expected = &ComplexMatrix::identity(2) - &p.scale_real(2.0);
        assert!(u.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn expm_matches_taylor_partial_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(4, &mut rng);
        let theta = 0.7;
        // Σ_k (-iθH)^k / k!, truncated once terms fall below 1e-18.
        let generator = h.scale(C64::new(0.0, -theta));
        let mut term = ComplexMatrix::identity(4);
        let mut sum = term.clone();
        for k in 1..60 {
            term = term.matmul(&generator).scale_real(1.0 / k as f64);
            sum = &sum + &term;
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        let u = expm_oracle(&h, theta).unwrap();
        assert!(u.max_abs_diff(&sum) <= 1e-8);
        assert!(unitarity_error(&u) <= 1e-9);
    }
}
