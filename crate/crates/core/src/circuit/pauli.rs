use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// `coeff * ⊗_q P_q`, identity on qubits not listed.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub ops: BTreeMap<usize, Pauli>,
}

impl PauliTerm {
    pub fn new(coeff: f64, ops: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        Self {
            coeff,
            ops: ops.into_iter().collect(),
        }
    }
}

/// A real-weighted sum of Pauli strings; Hermitian by construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(terms: Vec<PauliTerm>) -> Result<Self> {
        let sum = Self { terms };
        for t in &sum.terms {
            if !t.coeff.is_finite() {
                return Err(Error::InvalidObservable("non-finite coefficient".into()));
            }
            if t.ops.is_empty() {
                return Err(Error::InvalidObservable("empty Pauli string".into()));
            }
        }
        Ok(sum)
    }

    /// Single-term convenience constructor.
    pub fn single(coeff: f64, ops: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        Self::new(vec![PauliTerm::new(coeff, ops)])
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn push(&mut self, term: PauliTerm) -> Result<()> {
        let mut next = self.terms.clone();
        next.push(term);
        *self = Self::new(next)?;
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> PauliSum {
        PauliSum {
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm {
                    coeff: t.coeff * factor,
                    ops: t.ops.clone(),
                })
                .collect(),
        }
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter_map(|t| t.ops.keys().next_back().copied())
            .max()
    }

    pub(crate) fn check(&self, n_qubits: usize) -> Result<()> {
        match self.max_qubit() {
            Some(q) if q >= n_qubits => Err(Error::QubitOutOfRange { qubit: q, n_qubits }),
            _ => Ok(()),
        }
    }
}
