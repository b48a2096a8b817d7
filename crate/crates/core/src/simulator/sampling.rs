use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::StateVector;
use crate::error::{Error, Result};
use crate::seeded_rng;

/// Shot count used when none is given.
pub const DEFAULT_SHOTS: usize = 1024;

/// Histogram of measured bitstrings. Bitstrings list qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShotCounts {
    #[serde(flatten)]
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    #[serde(skip)]
    outcomes: Vec<usize>,
    #[serde(skip)]
    n_qubits: usize,
}

impl ShotCounts {
    pub fn from_outcomes(n_qubits: usize, outcomes: Vec<usize>) -> Self {
        let mut counts = BTreeMap::new();
        for &o in &outcomes {
            *counts.entry(bitstring(o, n_qubits)).or_insert(0) += 1;
        }
        Self {
            counts,
            shots: outcomes.len() as u64,
            outcomes,
            n_qubits,
        }
    }

    /// Measured basis-state indices in draw order.
    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn frequency(&self, bits: &str) -> f64 {
        self.counts.get(bits).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// Average of `score` over all shots; `score` receives one bool per qubit
    /// (`true` = measured 1).
    pub fn mean_score(&self, score: impl Fn(&[bool]) -> f64) -> f64 {
        let n = self.n_qubits;
        let mut bits = vec![false; n];
        let total: f64 = self
            .outcomes
            .iter()
            .map(|&o| {
                for (q, b) in bits.iter_mut().enumerate() {
                    *b = (o >> (n - 1 - q)) & 1 == 1;
                }
                score(&bits)
            })
            .sum();
        total / self.outcomes.len() as f64
    }
}

pub(crate) fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if (index >> (n_qubits - 1 - q)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Draws `shots` computational-basis outcomes from `|a_i|²`.
pub fn sample(state: &StateVector, shots: usize, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let mut cdf = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for a in state.amplitudes() {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let mut rng = seeded_rng(seed);
    let last = state.dim() - 1;
    let outcomes = (0..shots)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect();
    Ok(ShotCounts::from_outcomes(state.n_qubits(), outcomes))
}

/// Flips each measured bit independently with probability `flip_prob`.
pub fn apply_readout_noise(counts: &ShotCounts, flip_prob: f64, seed: u64) -> ShotCounts {
    let n = counts.n_qubits;
    let mut rng = seeded_rng(seed);
    let outcomes = counts
        .outcomes
        .iter()
        .map(|&o| {
            (0..n).fold(o, |acc, q| {
                if rng.random::<f64>() < flip_prob {
                    acc ^ (1 << (n - 1 - q))
                } else {
                    acc
                }
            })
        })
        .collect();
    ShotCounts::from_outcomes(n, outcomes)
}
