//! Circuit diagnostics built on the simulator, trainer and statistics layers.
//!
//! Ensemble analyzers draw parameter vectors uniformly from `[0, 2π)^M`. Draw
//! `i` of an analyzer called with seed `s` uses the generator seeded with
//! `s + i`, and per-draw results are reduced in index order.

mod entanglement;
mod expressibility;
mod histograms;
mod landscape;
mod path;
mod plateau;
mod reachability;
mod spectrum;

use std::f64::consts::TAU;

use rand::Rng;

use crate::circuit::CircuitDescriptor;
use crate::error::Result;
use crate::seeded_rng;
use crate::simulator::{simulate, StateVector};

pub use entanglement::{
    entanglement_capability, entanglement_of_states, meyer_wallach, scott, EntanglementMeasure,
    EntanglementReport, EntanglementValue,
};
pub use expressibility::{expressibility, fidelity_samples, ExpressibilityReport};
pub use histograms::{parameter_histogram, ParameterHistograms};
pub use landscape::{
    loss_landscape, max_cut_metric, BasisMode, LandscapeGrid, LandscapeOptions, MetricSpec, Scorer,
};
pub use path::{training_path, EmbeddedPoint, PathMode, PathReport};
pub use plateau::{barren_plateau_scan, CostKind, PlateauScan, Spectators};
pub use reachability::{reachability, ReachabilityReport};
pub use spectrum::{entanglement_spectrum, SpectrumOptions, SpectrumReport};

/// Parameter vector with entries uniform on `[0, 2π)`.
pub fn uniform_theta(n_parameters: usize, seed: u64) -> Vec<f64> {
    let mut rng = seeded_rng(seed);
    (0..n_parameters).map(|_| rng.random::<f64>() * TAU).collect()
}

/// State prepared by `circuit` at a uniformly drawn parameter vector.
pub fn random_state(circuit: &CircuitDescriptor, seed: u64) -> Result<StateVector> {
    let theta = uniform_theta(circuit.n_parameters(), seed);
    simulate(&circuit.bind(&theta)?, None)
}

/// `count` evenly spaced values from `-range` to `range`, both included.
pub fn symmetric_axis(count: usize, range: f64) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    let half = (count - 1) as f64;
    (0..count)
        .map(|i| (2.0 * i as f64 - half) / half * range)
        .collect()
}

fn schema() -> String {
    crate::SCHEMA_VERSION.to_string()
}
