//! Array Hamiltonian in raw charge-qubit form and in nearest-neighbour
//! projector form.
//!
//! Site `k` is the k-th Kronecker factor from the left, i.e. bit `n − 1 − k`
//! of a computational basis index. Sites are 0-based here and 1-based in
//! anything shown to a user.

use crate::charge_qubit::{coupling_strength, effective_josephson, ChainParams, QubitParams};
use crate::error::{Error, Result};
use crate::linalg::{kron_all, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let o = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [one, o, o, one],
            Pauli::X => [o, one, one, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [one, o, o, -one],
        };
        ComplexMatrix::from_fn(2, 2, |r, c| entries[2 * r + c])
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliLabel {
    pub axis: Pauli,
    pub site: usize,
}

impl PauliLabel {
    pub fn new(axis: Pauli, site: usize) -> Self {
        Self { axis, site }
    }
}

/// I ⊗ … ⊗ σ ⊗ … ⊗ I with σ at `label.site`.
pub fn pauli_embed(label: PauliLabel, n: usize) -> Result<ComplexMatrix> {
    pauli_string(n, &[(label.site, label.axis)])
}

/// Tensor product with the listed single-site operators and identity elsewhere.
pub fn pauli_string(n: usize, factors: &[(usize, Pauli)]) -> Result<ComplexMatrix> {
    let mut axes = vec![Pauli::I; n];
    for &(site, axis) in factors {
        if site >= n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        axes[site] = axis;
    }
    let mats: Vec<ComplexMatrix> = axes.iter().map(|a| a.matrix()).collect();
    Ok(kron_all(&mats))
}

/// Embeds an arbitrary 2×2 operator at `site`.
pub fn embed_single(op: &ComplexMatrix, site: usize, n: usize) -> Result<ComplexMatrix> {
    if site >= n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    let mats: Vec<ComplexMatrix> =
        (0..n).map(|k| if k == site { op.clone() } else { ComplexMatrix::identity(2) }).collect();
    Ok(kron_all(&mats))
}

/// Π = (1 − σˣ)/2 on a single qubit.
pub fn single_projector() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]])
}

/// Π_site = (1 − σˣ_site)/2
pub fn projector_site(site: usize, n: usize) -> Result<ComplexMatrix> {
    embed_single(&single_projector(), site, n)
}

/// Π_i Π_{i+1}
pub fn pair_projector(i: usize, n: usize) -> Result<ComplexMatrix> {
    if i + 1 >= n {
        return Err(Error::SiteOutOfRange { site: i + 1, n });
    }
    let p = single_projector();
    let mats: Vec<ComplexMatrix> = (0..n)
        .map(|k| if k == i || k == i + 1 { p.clone() } else { ComplexMatrix::identity(2) })
        .collect();
    Ok(kron_all(&mats))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleSiteTerm {
    pub site: usize,
    pub coefficient: f64,
    pub axis: Pauli,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteTerm {
    pub sites: (usize, usize),
    pub coefficient: f64,
    pub axes: (Pauli, Pauli),
}

/// Real-coefficient Pauli expansion of a nearest-neighbour chain Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianTerms {
    n_qubits: usize,
    single_site: Vec<SingleSiteTerm>,
    two_site: Vec<TwoSiteTerm>,
    constant: f64,
}

impl HamiltonianTerms {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, single_site: Vec::new(), two_site: Vec::new(), constant: 0.0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn single_site(&self) -> &[SingleSiteTerm] {
        &self.single_site
    }

    pub fn two_site(&self) -> &[TwoSiteTerm] {
        &self.two_site
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn add_single(&mut self, site: usize, coefficient: f64, axis: Pauli) -> Result<()> {
        if site >= self.n_qubits {
            return Err(Error::SiteOutOfRange { site, n: self.n_qubits });
        }
        self.single_site.push(SingleSiteTerm { site, coefficient, axis });
        Ok(())
    }

    pub fn add_pair(&mut self, i: usize, j: usize, coefficient: f64, axes: (Pauli, Pauli)) -> Result<()> {
        for site in [i, j] {
            if site >= self.n_qubits {
                return Err(Error::SiteOutOfRange { site, n: self.n_qubits });
            }
        }
        if i.abs_diff(j) != 1 {
            return Err(Error::NotNearestNeighbor(i, j));
        }
        self.two_site.push(TwoSiteTerm { sites: (i, j), coefficient, axes });
        Ok(())
    }

    pub fn add_constant(&mut self, value: f64) {
        self.constant += value;
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.n_qubits;
        let dim = 1usize << n;
        let mut h = ComplexMatrix::identity(dim).scale_real(self.constant);
        for t in &self.single_site {
            h = &h + &pauli_string(n, &[(t.site, t.axis)])?.scale_real(t.coefficient);
        }
        for t in &self.two_site {
            let op = pauli_string(n, &[(t.sites.0, t.axes.0), (t.sites.1, t.axes.1)])?;
            h = &h + &op.scale_real(t.coefficient);
        }
        Ok(h)
    }
}

/// −Ē_J σˣ per site plus Λ σˣσˣ per neighbouring pair, at the degeneracy point.
///
/// Accepts a single qubit (no coupling terms), unlike [`ChainParams`].
pub fn raw_terms(qubits: &[QubitParams], coupler_inductance: f64) -> Result<HamiltonianTerms> {
    let n = qubits.len();
    let mut terms = HamiltonianTerms::new(n);
    for (i, q) in qubits.iter().enumerate() {
        if !q.at_degeneracy() {
            return Err(Error::NotAtDegeneracy { qubit: i + 1, offset: q.offset_charge });
        }
        terms.add_single(i, -effective_josephson(q)?, Pauli::X)?;
    }
    for i in 0..n.saturating_sub(1) {
        let lambda = coupling_strength(&qubits[i], &qubits[i + 1], coupler_inductance)?;
        terms.add_pair(i, i + 1, lambda, (Pauli::X, Pauli::X))?;
    }
    Ok(terms)
}

pub fn build_raw(chain: &ChainParams) -> Result<ComplexMatrix> {
    raw_terms(&chain.qubits, chain.coupler_inductance)?.to_matrix()
}

/// g·Σ Π_i Π_{i+1}
pub fn build_projector_form(n: usize, g: f64) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("projector form needs n >= 2, got {n}")));
    }
    if !(g > 0.0) {
        return Err(Error::InvalidParameter(format!("rate g must be positive, got {g}")));
    }
    let dim = 1usize << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..n - 1 {
        h = &h + &pair_projector(i, n)?;
    }
    Ok(h.scale_real(g))
}

/// Constant c with `projector_form − raw = c·I`, checked against (N − 1)g/4.
pub fn equivalence_shift(raw: &ComplexMatrix, projector_form: &ComplexMatrix, n: usize, g: f64) -> Result<f64> {
    if raw.rows() != projector_form.rows() || raw.cols() != projector_form.cols() {
        return Err(Error::DimensionMismatch { expected: projector_form.rows(), found: raw.rows() });
    }
    let diff = projector_form - raw;
    let dim = diff.rows();
    let c = diff.trace().re / dim as f64;
    let residual = diff.max_abs_diff(&ComplexMatrix::identity(dim).scale_real(c));
    if residual > 1e-9 {
        return Err(Error::NotProportionalToIdentity(residual));
    }
    let expected = (n as f64 - 1.0) * g / 4.0;
    if (c - expected).abs() > 1e-10 {
        return Err(Error::UnexpectedShift { expected, found: c });
    }
    Ok(c)
}

/// Largest entry of [Π_iΠ_{i+1}, Π_jΠ_{j+1}] over all pairs of bonds.
pub fn pairwise_commutators(n: usize) -> Result<f64> {
    let bonds: Vec<ComplexMatrix> = (0..n.saturating_sub(1)).map(|i| pair_projector(i, n)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (a, pa) in bonds.iter().enumerate() {
        for pb in &bonds[a + 1..] {
            worst = worst.max(pa.commutator(pb).max_abs());
        }
    }
    Ok(worst)
}
