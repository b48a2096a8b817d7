//! Histograms, divergences and Haar-random reference distributions.

mod divergence;
mod haar;
mod histogram;

pub use divergence::{js_distance, kl_divergence, ks_distance, ks_two_sample, DivergenceMeasure};
pub use haar::{
    haar_fidelity_baseline, haar_fidelity_cdf, haar_fidelity_pdf, mp_reference_on_grid, mp_reference_spectrum,
    sample_haar_state, xi_from_eigenvalues, MpReference, XI_BINS, XI_CUTOFF,
};
pub use histogram::{histogram, uniform_edges, Histogram, DEFAULT_BINS};
