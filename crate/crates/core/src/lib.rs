//! Simulation and analysis toolkit for parameterized quantum circuits.
//!
//! The crate is organized bottom-up:
//!
//! - [`circuit`]: circuit descriptors, symbolic parameters, Pauli-sum costs
//!   and the JSON circuit-spec format.
//! - [`simulator`]: statevector evolution, expectations, shot sampling and
//!   stochastic Pauli noise.
//! - [`trainer`]: parameter-shift gradients and GD/Adam training loops.
//! - [`stats`]: histograms, KL/JS divergences and Haar-random baselines.
//! - [`projection`]: PCA and exact t-SNE for parameter trajectories.
//! - [`analyzers`]: expressibility, entangling capability, entanglement
//!   spectrum, loss landscapes, barren-plateau scans, training paths,
//!   parameter histograms and reachability.
//!
//! Every randomized routine takes an explicit `u64` seed. Ensemble loops
//! assign seed `base + i` to member `i` and reduce in index order, so results
//! do not depend on the number of worker threads.

pub mod analyzers;
pub mod circuit;
mod error;
pub mod projection;
pub mod simulator;
pub mod stats;
pub mod trainer;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use circuit::{
    parse_circuit_spec, BoundCircuit, CircuitBuilder, CircuitDescriptor, Gate, GateKind, Pauli,
    PauliSum, PauliTerm,
};
pub use error::{Error, Result};
pub use simulator::{expectation, simulate, DensityMatrix, StateVector};
pub use stats::Histogram;
pub use trainer::{OptimizerConfig, TrainingTrace};

/// Version tag embedded in every serialized report.
pub const SCHEMA_VERSION: &str = "pqc-lens/1";

/// Deterministic generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
