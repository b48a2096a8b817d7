use nalgebra::DMatrix;
use num_complex::Complex64;

use super::StateVector;
use crate::error::{Error, Result};

/// Mixed state on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_entries(n_qubits: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        let d = 1usize << n_qubits;
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::InvalidArgument(format!(
                "{}x{} matrix for {n_qubits} qubits",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { n_qubits, entries })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            n_qubits: state.n_qubits(),
            entries: &v * v.adjoint(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // ρ is Hermitian, so Tr ρ² = Σ |ρ_ij|².
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.entries.nrows();
        (0..d).all(|i| {
            (0..d).all(|j| (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm() <= tol)
        })
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

/// Reshapes amplitudes into a `2^|keep| x 2^(n-|keep|)` matrix whose rows index
/// the kept qubits (ascending qubit order, lowest index most significant).
fn bipartite_matrix(state: &StateVector, keep: &[usize]) -> Result<DMatrix<Complex64>> {
    let n = state.n_qubits();
    if keep.is_empty() {
        return Err(Error::InvalidArgument("subsystem must be nonempty".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::InvalidArgument("subsystem has repeated qubits".into()));
    }
    if let Some(&q) = kept.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange {
            qubit: q,
            n_qubits: n,
        });
    }
    let rest: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let (da, db) = (1usize << kept.len(), 1usize << rest.len());
    let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
    let mut m = DMatrix::<Complex64>::zeros(da, db);
    for (i, amp) in state.amplitudes().iter().enumerate() {
        let a = kept.iter().fold(0, |acc, &q| (acc << 1) | bit(i, q));
        let b = rest.iter().fold(0, |acc, &q| (acc << 1) | bit(i, q));
        m[(a, b)] = *amp;
    }
    Ok(m)
}

/// `ρ_A = Tr_B |ψ⟩⟨ψ|` for `A = keep`.
pub fn reduced_density_matrix(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let m = bipartite_matrix(state, keep)?;
    let rho = &m * m.adjoint();
    Ok(DensityMatrix {
        n_qubits: keep.len(),
        entries: rho,
    })
}

/// `Tr ρ_A²`, computed on whichever side of the cut is smaller.
pub fn subsystem_purity(state: &StateVector, keep: &[usize]) -> Result<f64> {
    let m = bipartite_matrix(state, keep)?;
    let gram = if m.nrows() <= m.ncols() {
        &m * m.adjoint()
    } else {
        m.adjoint() * &m
    };
    Ok(gram.iter().map(|z| z.norm_sqr()).sum())
}
