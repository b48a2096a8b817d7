use rayon::prelude::*;
use serde::Serialize;

use super::schema;
use crate::circuit::CircuitDescriptor;
use crate::error::{Error, Result};
use crate::simulator::expectation;
use crate::stats::sample_haar_state;
use crate::trainer::{ensemble_train, OptimizerConfig};

#[derive(Debug, Clone, Serialize)]
pub struct ReachabilityReport {
    pub schema: String,
    /// `haar_minimum - pqc_minimum`, reported with its sign.
    pub f_r: f64,
    pub haar_minimum: f64,
    pub pqc_minimum: f64,
    pub restart_minima: Vec<f64>,
    pub haar_samples: usize,
    pub restarts: usize,
    pub seed: u64,
}

/// Compares the lowest cost seen over Haar-random states (state `i` seeded
/// `seed + i`) with the lowest final loss over trained restarts (restart `r`
/// seeded `seed + r`).
pub fn reachability(
    circuit: &CircuitDescriptor,
    haar_samples: usize,
    restarts: usize,
    config: &OptimizerConfig,
    seed: u64,
) -> Result<ReachabilityReport> {
    let cost = circuit.require_cost()?;
    if haar_samples == 0 || restarts == 0 {
        return Err(Error::InvalidArgument("haar_samples and restarts must be at least 1".into()));
    }
    let n = circuit.n_qubits();
    let haar = (0..haar_samples)
        .into_par_iter()
        .map(|i| expectation(&sample_haar_state(n, seed.wrapping_add(i as u64))?, cost))
        .collect::<Result<Vec<f64>>>()?;
    let haar_minimum = haar.iter().copied().fold(f64::INFINITY, f64::min);

    let traces = ensemble_train(circuit, &config.clone().with_seed(seed), restarts)?;
    let restart_minima: Vec<f64> = traces.iter().map(|t| t.final_loss()).collect();
    let pqc_minimum = restart_minima.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ReachabilityReport {
        schema: schema(),
        f_r: haar_minimum - pqc_minimum,
        haar_minimum,
        pqc_minimum,
        restart_minima,
        haar_samples,
        restarts,
        seed,
    })
}
