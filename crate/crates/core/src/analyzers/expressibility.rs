use rayon::prelude::*;
use serde::Serialize;

use super::{random_state, schema};
use crate::circuit::CircuitDescriptor;
use crate::error::{Error, Result};
use crate::stats::{haar_fidelity_baseline, histogram, DivergenceMeasure, Histogram};

#[derive(Debug, Clone, Serialize)]
pub struct ExpressibilityReport {
    pub schema: String,
    pub measure: DivergenceMeasure,
    /// Divergence from the Haar law; smaller means more expressive.
    pub value: f64,
    pub samples: usize,
    pub n_qubits: usize,
    pub seed: u64,
    pub fidelity_histogram: Histogram,
    pub baseline_histogram: Histogram,
}

/// Fidelities `|⟨ψ(θ_a)|ψ(θ_b)⟩|²` of `samples` independent pairs. Pair `i`
/// uses draws `seed + 2i` and `seed + 2i + 1`.
pub fn fidelity_samples(circuit: &CircuitDescriptor, samples: usize, seed: u64) -> Result<Vec<f64>> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let a = random_state(circuit, seed.wrapping_add(2 * i as u64))?;
            let b = random_state(circuit, seed.wrapping_add(2 * i as u64 + 1))?;
            Ok(a.fidelity(&b))
        })
        .collect()
}

pub fn expressibility(
    circuit: &CircuitDescriptor,
    samples: usize,
    measure: DivergenceMeasure,
    bins: usize,
    seed: u64,
) -> Result<ExpressibilityReport> {
    if samples < 2 {
        return Err(Error::InvalidArgument("expressibility needs at least 2 samples".into()));
    }
    let fids = fidelity_samples(circuit, samples, seed)?;
    let fidelity_histogram = histogram(&fids, bins, 0.0, 1.0)?;
    let baseline_histogram =
        haar_fidelity_baseline(1usize << circuit.n_qubits(), &fidelity_histogram.edges)?;
    let value = measure.compute(&fidelity_histogram, &baseline_histogram)?;
    Ok(ExpressibilityReport {
        schema: schema(),
        measure,
        value,
        samples,
        n_qubits: circuit.n_qubits(),
        seed,
        fidelity_histogram,
        baseline_histogram,
    })
}
